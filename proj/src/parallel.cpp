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

#include "semimo/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace semimo {

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body) {
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const auto n_threads = static_cast<std::size_t>(std::max(1, workers));
    if (n_threads == 1 || n <= 1) {
        run();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < std::min(n_threads, n); ++t) pool.emplace_back(run);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace semimo
