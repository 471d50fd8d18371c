#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace rwr::detail {

/// Runs fn(item, worker) for item in [0, count) on `workers` threads. Items
/// are claimed dynamically; fn must not throw (callers capture per-item
/// errors themselves).
template <class Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i, std::size_t{0});
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> threads;
    const std::size_t n = std::min(workers, count);
    threads.reserve(n);
    for (std::size_t w = 0; w < n; ++w) {
        threads.emplace_back([&, w] {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) fn(i, w);
        });
    }
}

} // namespace rwr::detail
