#pragma once

#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace vp1d {

/// Thread count for data-parallel loops: VP1D_THREADS, default 1
/// (the sequential reference path; bit-identical output is only promised
/// there).
inline unsigned worker_threads() {
    if (const char* env = std::getenv("VP1D_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<unsigned>(n);
    }
    return 1;
}

/// fn(i) over [0, n), block-partitioned; rows written by one worker only
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const unsigned workers = worker_threads();
    if (workers <= 1 || n < 2 * workers) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace vp1d
