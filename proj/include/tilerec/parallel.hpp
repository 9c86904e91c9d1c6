#pragma once

// Deterministic parallel helpers: results depend only on the index space and
// the combining operation, never on thread count or completion order.

#include <atomic>
#include <cstddef>
#include <optional>
#include <thread>
#include <vector>

namespace tilerec {

inline unsigned effective_threads(unsigned requested) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (requested == 0) return hw;
    return std::min(requested, hw);
}

// Runs fn(i) for i in [0, count). Order across threads is unspecified, so fn
// must only write to per-index slots or thread-local state.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    const unsigned t = effective_threads(threads);
    if (t <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (unsigned w = 0; w < t; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

// Min-reduction over optional per-index values under a strict weak order on
// values; the result equals the sequential first minimum.
template <class T, class Fn, class Less>
std::optional<T> parallel_min(std::size_t count, unsigned threads, Fn&& fn, Less less) {
    std::vector<std::optional<T>> slots(count);
    parallel_for(count, threads, [&](std::size_t i) { slots[i] = fn(i); });
    std::optional<T> best;
    for (std::size_t i = 0; i < count; ++i)
        if (slots[i] && (!best || less(*slots[i], *best))) best = std::move(slots[i]);
    return best;
}

}  // namespace tilerec
