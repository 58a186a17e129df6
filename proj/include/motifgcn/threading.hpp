#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace motifgcn {

// Runs fn(begin, end, worker) over contiguous chunks of [begin, end).
// Each index is owned by exactly one worker, so callers that write
// per-index outputs get results independent of the thread count.
template <typename Fn>
void parallel_for(std::size_t begin, std::size_t end, int threads, Fn&& fn) {
    const std::size_t total = end > begin ? end - begin : 0;
    if (threads <= 1 || total < 2) {
        fn(begin, end, 0);
        return;
    }
    const std::size_t nw = std::min<std::size_t>(static_cast<std::size_t>(threads), total);
    const std::size_t chunk = (total + nw - 1) / nw;
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (std::size_t w = 0; w < nw; ++w) {
        const std::size_t lo = begin + w * chunk;
        const std::size_t hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi, w] { fn(lo, hi, static_cast<int>(w)); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace motifgcn
