#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <future>
#include <optional>
#include <vector>

namespace styledisp {

// Runs fn(i) for i in [0, count) with at most `max_in_flight` calls running
// at once. Results come back in index order regardless of completion order.
// Every task runs to completion; the first exception (by index) is rethrown
// after all tasks finished, unless `errors` is supplied to collect them.
template <typename Fn>
auto ordered_parallel_map(std::size_t count, std::size_t max_in_flight, Fn&& fn,
                          std::vector<std::exception_ptr>* errors = nullptr)
    -> std::vector<std::optional<decltype(fn(std::size_t{}))>> {
    using Result = decltype(fn(std::size_t{}));
    std::vector<std::optional<Result>> results(count);
    std::vector<std::exception_ptr> failures(count);
    max_in_flight = std::max<std::size_t>(1, max_in_flight);

    for (std::size_t start = 0; start < count; start += max_in_flight) {
        const std::size_t stop = std::min(count, start + max_in_flight);
        if (stop - start == 1) {
            try {
                results[start].emplace(fn(start));
            } catch (...) {
                failures[start] = std::current_exception();
            }
            continue;
        }
        std::vector<std::future<Result>> wave;
        wave.reserve(stop - start);
        for (std::size_t i = start; i < stop; ++i) {
            wave.push_back(std::async(std::launch::async, [&fn, i] { return fn(i); }));
        }
        for (std::size_t i = start; i < stop; ++i) {
            try {
                results[i].emplace(wave[i - start].get());
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    }

    if (errors != nullptr) {
        *errors = std::move(failures);
    } else {
        for (const auto& failure : failures) {
            if (failure) std::rethrow_exception(failure);
        }
    }
    return results;
}

}  // namespace styledisp
