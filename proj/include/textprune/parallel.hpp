#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace textprune {

// Number of worker threads to use when the caller asked for "default".
// Requested values <= 0 mean "all available cores".
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(block_index, begin, end) over [0, count) split into fixed-size
// blocks. The block layout depends only on count and block_size, never on
// the thread count, so any reduction that folds per-block results in block
// order is bit-identical across thread counts.
template <typename Fn>
void parallel_blocks(std::size_t count, std::size_t block_size, int threads, Fn&& fn) {
    if (count == 0) return;
    if (block_size == 0) block_size = 1;
    const std::size_t num_blocks = (count + block_size - 1) / block_size;

    auto run_block = [&](std::size_t b) {
        const std::size_t lo = b * block_size;
        const std::size_t hi = std::min(count, lo + block_size);
        fn(b, lo, hi);
    };

    const int workers = std::min<std::size_t>(resolve_threads(threads), num_blocks);
    if (workers <= 1) {
        for (std::size_t b = 0; b < num_blocks; ++b) run_block(b);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t b = next.fetch_add(1, std::memory_order_relaxed);
            if (b >= num_blocks) return;
            try {
                run_block(b);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

// Convenience wrapper: fn(i) for each index, blocked.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t block_size, int threads, Fn&& fn) {
    parallel_blocks(count, block_size, threads,
                    [&](std::size_t, std::size_t lo, std::size_t hi) {
                        for (std::size_t i = lo; i < hi; ++i) fn(i);
                    });
}

// Deterministic pairwise (tree) summation. Order of additions depends only
// on the length of the input.
inline double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 32) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t mid = xs.size() / 2;
    return pairwise_sum(xs.first(mid)) + pairwise_sum(xs.subspan(mid));
}

}  // namespace textprune
