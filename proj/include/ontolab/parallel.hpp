// Minimal deterministic fan-out: workers take strided index ranges and write
// results into per-index slots, so the combination order is fixed by index,
// not by scheduling.
#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace ontolab {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Runs fn(i) for i in [0, n); fn must only touch state owned by index i.
template <typename Fn>
void parallel_for_index(std::size_t n, int threads, Fn&& fn) {
    int t = resolve_threads(threads);
    if (t <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(t));
    for (int w = 0; w < t; ++w) {
        workers.emplace_back([w, t, n, &fn] {
            for (std::size_t i = static_cast<std::size_t>(w); i < n; i += static_cast<std::size_t>(t))
                fn(i);
        });
    }
    for (auto& th : workers) th.join();
}

}  // namespace ontolab
