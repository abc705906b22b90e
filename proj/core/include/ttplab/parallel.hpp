#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace ttplab {

// Index-space parallel loop. Work items write only to their own slots, so
// results are identical for any thread count; reductions happen afterwards
// in index order.
template <class F>
void parallel_for(std::size_t n, int n_threads, F&& body) {
    if (n == 0) return;
    if (n_threads <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(n_threads, n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace ttplab
