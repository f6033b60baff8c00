#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace glab {

/// Worker count: GLAB_THREADS caps it, default all hardware threads.
inline int thread_count() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("GLAB_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<int>(std::min<long>(v, 256));
    }
    return static_cast<int>(hw);
}

/// Runs f(i) for i in [0, n). Work is split into contiguous chunks; the
/// caller must make f(i) depend only on i (per-index rng substreams, output
/// written to preallocated slot i), which keeps results identical for every
/// thread count.
template <class F>
void parallel_for(long n, F&& f) {
    int t = thread_count();
    if (t <= 1 || n < 64) {
        for (long i = 0; i < n; ++i) f(i);
        return;
    }
    long chunk = (n + t - 1) / t;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(t));
    for (int w = 0; w < t; ++w) {
        long lo = w * chunk;
        long hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &f] {
            for (long i = lo; i < hi; ++i) f(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace glab
