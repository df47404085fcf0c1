// parallel.hpp
// Fan-out over grid points with results gathered in grid order.

#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace homql::cli {

// Environment variable capping the worker pool.
inline constexpr const char* kWorkerEnv = "HOMQL_MAX_WORKERS";

std::size_t worker_count(std::size_t jobs);

template <class T, class Fn>
std::vector<T> parallel_map(std::size_t jobs, Fn&& fn) {
    std::vector<std::optional<T>> slots(jobs);
    std::vector<std::exception_ptr> errors(jobs);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < jobs; i = next++) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t workers = worker_count(jobs);
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }
    std::vector<T> out;
    out.reserve(jobs);
    for (std::size_t i = 0; i < jobs; ++i) {
        if (errors[i]) {
            std::rethrow_exception(errors[i]);
        }
        out.push_back(std::move(*slots[i]));
    }
    return out;
}

}  // namespace homql::cli
