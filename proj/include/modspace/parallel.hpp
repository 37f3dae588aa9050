#ifndef MODSPACE_PARALLEL_HPP
#define MODSPACE_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace modspace {

namespace detail {
inline std::atomic<unsigned>& thread_setting() {
    static std::atomic<unsigned> threads{1};
    return threads;
}
}  // namespace detail

/// Number of worker threads used by parallel loops. Defaults to 1.
inline unsigned worker_threads() { return detail::thread_setting().load(); }

inline void set_worker_threads(unsigned n) { detail::thread_setting().store(std::max(1u, n)); }

/// Runs body(i) for i in [0, count). Each index is handled by exactly one
/// thread, so writes into per-index slots give results independent of the
/// thread count. Reductions must be done by the caller afterwards.
template <typename Body>
void parallel_for(std::size_t count, Body&& body) {
    const unsigned threads = std::min<std::size_t>(worker_threads(), count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) {
                    return;
                }
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                    next.store(count);
                }
            }
        });
    }
    for (auto& worker : pool) {
        worker.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace modspace

#endif  // MODSPACE_PARALLEL_HPP
