#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace scanplan {

// Static-chunked parallel loop. Each index is processed exactly once with no
// shared mutable state, so results are identical to the serial loop.
template <class Fn>
void parallel_for(std::int64_t n, Fn&& fn) {
    if (n <= 0) return;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const std::int64_t workers = std::min<std::int64_t>(hw, n);
    if (workers <= 1 || n < 64) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(workers);
    const std::int64_t chunk = (n + workers - 1) / workers;
    for (std::int64_t w = 0; w < workers; ++w) {
        const std::int64_t lo = w * chunk;
        const std::int64_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        threads.emplace_back([lo, hi, &fn] {
            for (std::int64_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : threads) t.join();
}

}  // namespace scanplan
