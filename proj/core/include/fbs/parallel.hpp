#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace fbs {

/// Number of workers to use when the caller asks for "all of them".
inline int max_workers() noexcept {
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/// Runs body(begin, end) over contiguous slices of [0, count) on up to
/// `workers` threads. Slices are disjoint; the body must only write to
/// outputs owned by its slice, which keeps results independent of the
/// worker count.
template <typename Body>
void parallel_for(int count, int workers, Body&& body) {
    if (count <= 0) {
        return;
    }
    workers = std::clamp(workers, 1, count);
    if (workers == 1) {
        body(0, count);
        return;
    }

    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    {
        std::vector<std::jthread> threads;
        threads.reserve(static_cast<std::size_t>(workers));
        const int chunk = count / workers;
        const int extra = count % workers;
        int begin = 0;
        for (int w = 0; w < workers; ++w) {
            const int end = begin + chunk + (w < extra ? 1 : 0);
            threads.emplace_back([&body, &errors, w, begin, end] {
                try {
                    body(begin, end);
                } catch (...) {
                    errors[static_cast<std::size_t>(w)] = std::current_exception();
                }
            });
            begin = end;
        }
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

}  // namespace fbs
