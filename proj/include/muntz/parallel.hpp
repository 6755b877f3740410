#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <type_traits>
#include <vector>

namespace muntz {

/// Evaluates fn(i) for i in [0, count) on up to `workers` threads.  Results
/// are stored by index, so the output never depends on the worker count.
template <class Fn>
auto parallel_map(std::size_t count, unsigned workers, Fn&& fn) {
    using Result = std::invoke_result_t<Fn&, std::size_t>;
    std::vector<Result> out(count);
    workers = std::max(1u, std::min<unsigned>(workers, unsigned(std::max<std::size_t>(count, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        out[i] = fn(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

/// Generator for item `index` of a run seeded with `master`; independent of
/// scheduling.
inline std::mt19937_64 derived_rng(std::uint64_t master, std::uint64_t index) {
    std::seed_seq seq{std::uint32_t(master), std::uint32_t(master >> 32), std::uint32_t(index),
                      std::uint32_t(index >> 32), 0x6d756e74u};
    return std::mt19937_64(seq);
}

}  // namespace muntz
