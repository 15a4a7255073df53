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

#pragma once

#include <cstdint>
#include <random>

namespace semimo {

/// Identifies one reproducible realization: a master seed plus a trial
/// counter. Engines are derived from it by hashing, never by sequencing, so
/// parallel trials never share generator state.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t trial_index = 0;
};

/// Substream tags. Distinct tags on the same SeedSpec give independent engines.
enum class Stream : std::uint64_t {
    kKnownChannel = 0x11,
    kChannelError = 0x12,
    kNoise = 0x13,
    kPayload = 0x14,
    kProbe = 0x15,
    kFrame = 0x16,
    kBench = 0x17,
};

// splitmix64 finalizer over the combined words.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept;

std::mt19937_64 make_engine(SeedSpec seed, Stream stream, std::uint64_t sub_index = 0);

/// Seed for a nested level (e.g. frame f of trial t): the parent becomes the
/// master and `index` the new trial counter.
SeedSpec child_seed(SeedSpec parent, Stream tag, std::uint64_t index) noexcept;

}  // namespace semimo
