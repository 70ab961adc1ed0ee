#pragma once

// Chunked OpenMP loops whose results never depend on the thread count.
//
// Work over [0, count) is cut into chunks whose size depends only on count.
// Each thread builds its own scratch state with make_state(). Nested calls
// (already inside a parallel region) run serially.

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <vector>

namespace bertini::parallel {

/// Upper bound on the number of chunks of one loop.
inline constexpr std::uint64_t max_chunks = 1024;

inline std::uint64_t chunk_size(std::uint64_t count, std::uint64_t min_chunk = 64) {
    return std::max<std::uint64_t>(min_chunk, (count + max_chunks - 1) / max_chunks);
}

/// Collects exceptions thrown inside a parallel region and rethrows the first.
class ErrorSlot {
public:
    template <class F>
    void run(F&& f) noexcept {
        try {
            f();
        } catch (...) {
            std::lock_guard<std::mutex> lock(mu_);
            if (!error_) error_ = std::current_exception();
        }
    }
    bool failed() const {
        std::lock_guard<std::mutex> lock(mu_);
        return static_cast<bool>(error_);
    }
    void rethrow() {
        if (error_) std::rethrow_exception(error_);
    }

private:
    mutable std::mutex mu_;
    std::exception_ptr error_;
};

/// Least i in [0, count) with pred(state, i), scanning chunks in parallel.
template <class MakeState, class Pred>
std::optional<std::uint64_t> first_index(std::uint64_t count, MakeState make_state, Pred pred) {
    if (count == 0) return std::nullopt;
    if (omp_in_parallel()) {
        auto state = make_state();
        for (std::uint64_t i = 0; i < count; ++i)
            if (pred(state, i)) return i;
        return std::nullopt;
    }
    const std::uint64_t chunk = chunk_size(count);
    const auto chunks = static_cast<std::int64_t>((count + chunk - 1) / chunk);
    std::atomic<std::uint64_t> best{count};
    ErrorSlot errors;
#pragma omp parallel
    {
        std::optional<decltype(make_state())> state;
        errors.run([&] { state.emplace(make_state()); });
#pragma omp for schedule(dynamic, 1)
        for (std::int64_t c = 0; c < chunks; ++c) {
            if (!state || errors.failed()) continue;
            errors.run([&] {
                const std::uint64_t begin = static_cast<std::uint64_t>(c) * chunk;
                const std::uint64_t end = std::min(count, begin + chunk);
                for (std::uint64_t i = begin; i < end && i < best.load(std::memory_order_relaxed); ++i) {
                    if (pred(*state, i)) {
                        std::uint64_t cur = best.load();
                        while (i < cur && !best.compare_exchange_weak(cur, i)) {
                        }
                        break;
                    }
                }
            });
        }
    }
    errors.rethrow();
    std::uint64_t b = best.load();
    return b == count ? std::nullopt : std::optional<std::uint64_t>(b);
}

/// Number of i in [0, count) with pred(state, i).
template <class MakeState, class Pred>
std::uint64_t count_if(std::uint64_t count, MakeState make_state, Pred pred) {
    if (omp_in_parallel()) {
        auto state = make_state();
        std::uint64_t hits = 0;
        for (std::uint64_t i = 0; i < count; ++i) hits += pred(state, i) ? 1 : 0;
        return hits;
    }
    const std::uint64_t chunk = chunk_size(count);
    const auto chunks = static_cast<std::int64_t>((count + chunk - 1) / chunk);
    std::uint64_t hits = 0;
    ErrorSlot errors;
#pragma omp parallel reduction(+ : hits)
    {
        std::optional<decltype(make_state())> state;
        errors.run([&] { state.emplace(make_state()); });
#pragma omp for schedule(dynamic, 1)
        for (std::int64_t c = 0; c < chunks; ++c) {
            if (!state || errors.failed()) continue;
            errors.run([&] {
                const std::uint64_t begin = static_cast<std::uint64_t>(c) * chunk;
                const std::uint64_t end = std::min(count, begin + chunk);
                for (std::uint64_t i = begin; i < end; ++i) hits += pred(*state, i) ? 1 : 0;
            });
        }
    }
    errors.rethrow();
    return hits;
}

/// Concatenation of emit(state, i, out) over i in index order.
template <class T, class MakeState, class Emit>
std::vector<T> collect(std::uint64_t count, MakeState make_state, Emit emit) {
    std::vector<T> out;
    if (omp_in_parallel()) {
        auto state = make_state();
        for (std::uint64_t i = 0; i < count; ++i) emit(state, i, out);
        return out;
    }
    const std::uint64_t chunk = chunk_size(count);
    const auto chunks = static_cast<std::int64_t>((count + chunk - 1) / chunk);
    std::vector<std::vector<T>> parts(static_cast<std::size_t>(chunks));
    ErrorSlot errors;
#pragma omp parallel
    {
        std::optional<decltype(make_state())> state;
        errors.run([&] { state.emplace(make_state()); });
#pragma omp for schedule(dynamic, 1)
        for (std::int64_t c = 0; c < chunks; ++c) {
            if (!state || errors.failed()) continue;
            errors.run([&] {
                const std::uint64_t begin = static_cast<std::uint64_t>(c) * chunk;
                const std::uint64_t end = std::min(count, begin + chunk);
                for (std::uint64_t i = begin; i < end; ++i) emit(*state, i, parts[static_cast<std::size_t>(c)]);
            });
        }
    }
    errors.rethrow();
    for (auto& p : parts) out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
    return out;
}

}  // namespace bertini::parallel
