#pragma once

#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rholab {

inline unsigned resolve_workers(unsigned workers) {
    if (workers != 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Runs fn(i) for i in [0, n) and collects results indexed by i. Each index is
// computed independently (callers derive per-index RNG streams), so the output
// vector is identical for every worker count; consumers then fold it in index
// order, which keeps all derived artifacts byte-stable.
template <class T, class Fn>
std::vector<T> run_indexed_trials(std::uint64_t n, unsigned workers, Fn&& fn) {
    std::vector<T> out(static_cast<std::size_t>(n));
    unsigned w = resolve_workers(workers);
    if (w > n) w = static_cast<unsigned>(n);
    if (w <= 1) {
        for (std::uint64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(i);
        return out;
    }
    std::vector<std::thread> pool;
    pool.reserve(w);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (unsigned t = 0; t < w; ++t) {
        const std::uint64_t lo = n * t / w;
        const std::uint64_t hi = n * (t + 1) / w;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::uint64_t i = lo; i < hi; ++i) out[static_cast<std::size_t>(i)] = fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

}  // namespace rholab
