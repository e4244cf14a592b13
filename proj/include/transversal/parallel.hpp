#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace trv {

inline int resolve_threads(int threads) {
    if (threads > 0) return threads;
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Static index partition: worker w handles i with i % nw == w. Results must be
// combined by index so the outcome is independent of the worker count.
template <typename Fn>
void parallel_for(std::int64_t n, int threads, Fn&& fn) {
    int nw = std::min<std::int64_t>(resolve_threads(threads), std::max<std::int64_t>(n, 1));
    if (nw <= 1) {
        for (std::int64_t i = 0; i < n; ++i) fn(i, 0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (int w = 0; w < nw; ++w) {
        pool.emplace_back([&, w] {
            for (std::int64_t i = w; i < n; i += nw) fn(i, w);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace trv
