#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace stablenn {

/// Default worker count: $STABLENN_WORKERS if set and positive, else 1.
inline unsigned default_workers()
{
    if (const char* env = std::getenv("STABLENN_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(std::min(v, 1024L));
    }
    return 1;
}

/// Calls body(i) for i in [0, count) on up to `workers` threads.
///
/// Indices are split into contiguous blocks. body must only write state owned
/// by index i; the caller then sees results in index order no matter how many
/// workers ran. The exception from the lowest failing block is rethrown.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body)
{
    workers = std::max(1u, workers);
    if (workers == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    const std::size_t nthreads = std::min<std::size_t>(workers, count);
    std::vector<std::exception_ptr> errors(nthreads);
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) {
        const std::size_t lo = count * t / nthreads;
        const std::size_t hi = count * (t + 1) / nthreads;
        pool.emplace_back([&, t, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace stablenn
