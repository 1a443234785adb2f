#ifndef THETABUNDLE_PARALLEL_HPP
#define THETABUNDLE_PARALLEL_HPP

#include <cstdlib>
#include <thread>
#include <vector>

namespace thetabundle {

// Thread cap: THETA_BUNDLE_THREADS wins over hardware_concurrency.
inline unsigned thread_limit() {
    if (const char* env = std::getenv("THETA_BUNDLE_THREADS")) {
        long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<unsigned>(n);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1u;
}

// Static chunking over [0, n). Each index is visited exactly once and f must
// write only to slot i, so results are identical for every thread count.
template <class F>
void parallel_for(std::size_t n, F&& f) {
    unsigned nt = thread_limit();
    if (nt <= 1 || n < 2 * nt) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    std::size_t chunk = (n + nt - 1) / nt;
    for (unsigned t = 0; t < nt; ++t) {
        std::size_t lo = t * chunk;
        std::size_t hi = lo + chunk < n ? lo + chunk : n;
        if (lo >= hi) break;
        pool.emplace_back([&f, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) f(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace thetabundle

#endif
