#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace calr {

// Runs fn(begin, end) over disjoint index blocks. Falls back to a single
// call for small ranges. Callers must only write to disjoint locations so
// results stay identical to the serial order.
template <typename Fn>
void parallel_for_blocks(std::size_t n, std::size_t grain, Fn&& fn) {
    const unsigned hw = std::thread::hardware_concurrency();
    const std::size_t max_threads = hw == 0 ? 1 : hw;
    std::size_t num_threads = n / grain;
    if (num_threads > max_threads) num_threads = max_threads;
    if (num_threads <= 1) {
        fn(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(num_threads);
    const std::size_t chunk = (n + num_threads - 1) / num_threads;
    for (std::size_t t = 0; t < num_threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = begin + chunk < n ? begin + chunk : n;
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& th : pool) th.join();
}

} // namespace calr
