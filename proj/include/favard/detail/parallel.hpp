#pragma once

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <string_view>
#include <thread>
#include <vector>

namespace favard::detail {

/// Worker count: `requested` if nonzero, else hardware concurrency; either
/// way capped by the FAVARD_THREADS environment variable when it is set.
inline unsigned worker_count(unsigned requested = 0)
{
    unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("FAVARD_THREADS")) {
        std::string_view s(env);
        unsigned cap = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), cap);
        if (ec == std::errc{} && cap > 0) n = std::min(n, cap);
    }
    return std::max(1u, n);
}

/// results[i] = f(i) for i in [0, count), computed on up to `workers`
/// threads with a static stride. Output order never depends on scheduling.
template <class R, class F>
std::vector<R> parallel_map(std::size_t count, F&& f, unsigned workers = 0)
{
    std::vector<R> out(count);
    const unsigned w = static_cast<unsigned>(std::min<std::size_t>(worker_count(workers), std::max<std::size_t>(count, 1)));
    if (w <= 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
        return out;
    }
    std::vector<std::exception_ptr> errors(w);
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (unsigned t = 0; t < w; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < count; i += w) out[i] = f(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

} // namespace favard::detail
