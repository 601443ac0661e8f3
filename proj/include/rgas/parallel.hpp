#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace rgas {

/// Splits [0, n) into contiguous chunks, one per worker thread. `work`
/// receives (worker_id, lo, hi). workers <= 0 uses hardware concurrency.
inline void parallel_chunks(std::size_t n, int workers,
                            const std::function<void(int, std::size_t, std::size_t)>& work) {
    unsigned nw = workers > 0 ? static_cast<unsigned>(workers)
                              : std::max(1u, std::thread::hardware_concurrency());
    nw = static_cast<unsigned>(std::min<std::size_t>(nw, std::max<std::size_t>(n, 1)));
    if (nw <= 1) {
        work(0, 0, n);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + nw - 1) / nw;
    for (unsigned t = 0; t < nw; ++t) {
        const std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(work, static_cast<int>(t), lo, hi);
    }
    for (auto& th : pool) th.join();
}

} // namespace rgas
