#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace fdris {

// Run fn(i) for i in [0, n).  Each index is handled exactly once and writes
// only its own slot, so results are identical for any thread count.
template <typename F>
void parallel_for(std::size_t n, int threads, F&& fn) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace fdris
