#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

// Deterministic sample-level parallelism: results land in preallocated
// slots, so the reduction order never depends on scheduling.  The
// WICKBENCH_THREADS environment variable caps the worker count.

namespace wick {

inline unsigned worker_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("WICKBENCH_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
    }
    return hw;
}

template <typename Fn>
void parallel_for(std::size_t n, const Fn& fn) {
    unsigned workers = std::min<std::size_t>(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace wick
