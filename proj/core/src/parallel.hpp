#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace didrand::detail {

inline std::size_t resolve_workers(std::size_t requested, std::size_t total) {
    std::size_t w = requested == 0 ? std::max<std::size_t>(1, std::thread::hardware_concurrency()) : requested;
    return std::clamp<std::size_t>(w, 1, std::max<std::size_t>(1, total));
}

/// Splits [0, total) into `workers` contiguous blocks and runs
/// fn(block, begin, end) for each. Rethrows the exception of the lowest
/// failing block so failures are reported the same way for any worker count.
template <typename Fn>
void for_each_block(std::size_t total, std::size_t workers, Fn&& fn) {
    workers = resolve_workers(workers, total);
    const auto bounds = [&](std::size_t b) { return total * b / workers; };
    if (workers == 1) {
        fn(std::size_t{0}, std::size_t{0}, total);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> threads;
        threads.reserve(workers);
        for (std::size_t b = 0; b < workers; ++b) {
            threads.emplace_back([&, b] {
                try {
                    fn(b, bounds(b), bounds(b + 1));
                } catch (...) {
                    errors[b] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

} // namespace didrand::detail
