#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "ttp/format.hpp"

namespace ttp::bench {

// Worker count: TTP_FORGE_THREADS when set to a positive integer, else hardware concurrency.
inline std::size_t worker_count()
{
    std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("TTP_FORGE_THREADS")) {
        if (auto v = parse_int(trim(env)); v && *v > 0) {
            return static_cast<std::size_t>(*v);
        }
    }
    return hw;
}

// Runs fn(i) for i in [0, n) on up to worker_count() threads. The first exception is rethrown
// after all workers stop.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, std::size_t workers = worker_count())
{
    workers = std::max<std::size_t>(1, std::min(workers, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        while (!failed.load()) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace ttp::bench
