#pragma once

#include <cstdlib>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace spillnet {

// Worker count: explicit request, else SPILLNET_THREADS, else hardware.
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SPILLNET_THREADS")) {
        const int k = std::atoi(env);
        if (k > 0) return k;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs body(i) for i in [0, n). Work is split into contiguous chunks; results
// must be written to per-index slots so the outcome is identical for any
// worker count. The first exception (by chunk order) is rethrown.
template <typename Body>
void parallel_for(std::size_t n, int threads, Body&& body) {
    const int k = std::min<std::size_t>(static_cast<std::size_t>(resolve_threads(threads)), n == 0 ? 1 : n);
    if (n == 0) return;
    if (k <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(k));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(k));
    const std::size_t chunk = (n + static_cast<std::size_t>(k) - 1) / static_cast<std::size_t>(k);
    for (int w = 0; w < k; ++w) {
        const std::size_t lo = static_cast<std::size_t>(w) * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        pool.emplace_back([&, lo, hi, w] {
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace spillnet
