#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <thread>

#include "styledisp/error.hpp"
#include "styledisp/rng.hpp"

namespace styledisp {

struct RetryPolicy {
    // Number of retries after the first attempt.
    unsigned retry_budget = 3;
    std::chrono::milliseconds base_delay{500};
    std::chrono::milliseconds max_delay{30000};
    std::uint64_t jitter_seed = 0;
    // Replaceable so tests do not sleep.
    std::function<void(std::chrono::milliseconds)> sleep = [](std::chrono::milliseconds d) {
        std::this_thread::sleep_for(d);
    };
};

// Calls fn(attempt) until it returns or a non-retryable ProviderError is
// thrown. Retryable failures back off exponentially with full jitter. The
// last error is rethrown once 1 + retry_budget attempts are spent.
template <typename Fn>
auto with_retry(const RetryPolicy& policy, Fn&& fn) -> decltype(fn(0u)) {
    Rng jitter(policy.jitter_seed);
    for (unsigned attempt = 0;; ++attempt) {
        try {
            return fn(attempt);
        } catch (const ProviderError& e) {
            if (!e.retryable() || attempt >= policy.retry_budget) throw;
        }
        const auto cap = std::min<std::int64_t>(policy.max_delay.count(),
                                                policy.base_delay.count() << std::min(attempt, 20u));
        const auto delay = static_cast<std::int64_t>(jitter.uniform() * static_cast<double>(cap));
        if (policy.sleep) policy.sleep(std::chrono::milliseconds(delay));
    }
}

}  // namespace styledisp
