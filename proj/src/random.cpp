// Copyright 2026 The semimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "semimo/random.hpp"

namespace semimo {

namespace {

constexpr std::uint64_t splitmix(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept {
    return splitmix(splitmix(a) ^ (b + 0x632BE59BD9B4E019ULL + (a << 6) + (a >> 2)));
}

std::mt19937_64 make_engine(SeedSpec seed, Stream stream, std::uint64_t sub_index) {
    std::uint64_t s = mix_seed(seed.master_seed, seed.trial_index);
    s = mix_seed(s, static_cast<std::uint64_t>(stream));
    s = mix_seed(s, sub_index);
    std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
    return std::mt19937_64(seq);
}

SeedSpec child_seed(SeedSpec parent, Stream tag, std::uint64_t index) noexcept {
    const std::uint64_t m =
        mix_seed(mix_seed(parent.master_seed, parent.trial_index), static_cast<std::uint64_t>(tag));
    return SeedSpec{m, index};
}

}  // namespace semimo
