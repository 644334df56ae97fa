// Copyright 2026 the pmfix authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace pmfix::detail {

/// Worker budget for exhaustive checks: hardware concurrency, capped by
/// the PMFIX_THREADS environment variable (integer >= 1; anything else is
/// ignored).
inline unsigned thread_budget() {
    static const unsigned budget = [] {
        unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        if (const char* env = std::getenv("PMFIX_THREADS")) {
            char* end = nullptr;
            const long parsed = std::strtol(env, &end, 10);
            if (end != env && *end == '\0' && parsed >= 1) {
                hw = std::min<unsigned long>(hw, static_cast<unsigned long>(parsed));
            }
        }
        return hw;
    }();
    return budget;
}

/// Splits [0, n) into contiguous chunks, runs `per_chunk(begin, end)` on
/// each, and merges the partial results in chunk order, so the combined
/// result is independent of the thread count.
template <class R, class PerChunk, class Merge>
R parallel_chunked(std::size_t n, R init, PerChunk per_chunk, Merge merge) {
    const std::size_t workers =
        std::min<std::size_t>(thread_budget(), std::max<std::size_t>(n / 1024, 1));
    if (workers <= 1 || n < 2048) {
        if (n > 0) merge(init, per_chunk(0, n));
        return init;
    }
    std::vector<R> partial(workers, init);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        threads.emplace_back([&, w, begin, end] { partial[w] = per_chunk(begin, end); });
    }
    for (auto& t : threads) t.join();
    for (const auto& p : partial) merge(init, p);
    return init;
}

}  // namespace pmfix::detail
