#pragma once

// Exact 1D maximum-subarray solvers: plain, penalized and length-constrained.
//
// All intervals are 0-based and inclusive. Every solver returns a nonempty
// interval; ties are broken by larger sum, then shorter length, then smaller
// lo. Two sums are tied when they agree to within 1e-9 * (1 + |sum|).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "maxsub/error.hpp"

namespace maxsub {

struct Interval {
    std::size_t lo = 0;
    std::size_t hi = 0;

    constexpr std::size_t length() const noexcept { return hi - lo + 1; }
    constexpr bool contains(std::size_t i) const noexcept { return lo <= i && i <= hi; }
    friend constexpr bool operator==(const Interval&, const Interval&) = default;
};

struct Solution {
    Interval interval;
    double penalized_weight = 0.0;  // sum of (w_t - delta) over interval
    double raw_weight = 0.0;        // sum of w_t over interval

    std::size_t length() const noexcept { return interval.length(); }
};

inline constexpr double kTieTolerance = 1e-9;

/// True when a and b are equal up to the solver tie tolerance.
inline bool tied(double a, double b) noexcept {
    return std::abs(a - b) <= kTieTolerance * (1.0 + std::max(std::abs(a), std::abs(b)));
}

/// Ordering used by every solver: sum descending, then length, then lo.
inline bool better_candidate(double sum, std::size_t len, std::size_t lo,
                             double best_sum, std::size_t best_len, std::size_t best_lo) noexcept {
    if (!tied(sum, best_sum)) return sum > best_sum;
    if (len != best_len) return len < best_len;
    return lo < best_lo;
}

inline void validate_weights(std::span<const double> w) {
    if (w.empty()) throw InvalidInput("weight array is empty");
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!std::isfinite(w[i])) throw InvalidInput("weight at index " + std::to_string(i) + " is not finite");
    }
}

inline void validate_interval(const Interval& iv, std::size_t n) {
    if (iv.lo > iv.hi || iv.hi >= n) {
        throw InvalidInput("interval [" + std::to_string(iv.lo) + "," + std::to_string(iv.hi) +
                           "] is not inside [0," + std::to_string(n) + ")");
    }
}

/// Left-to-right sum of w[iv.lo..iv.hi] minus delta per element.
inline double interval_sum(std::span<const double> w, const Interval& iv, double delta = 0.0) {
    double s = 0.0;
    for (std::size_t t = iv.lo; t <= iv.hi; ++t) s += w[t] - delta;
    return s;
}

namespace detail {

inline Solution make_solution(std::span<const double> w, Interval iv, double delta) {
    return Solution{iv, interval_sum(w, iv, delta), interval_sum(w, iv)};
}

// Kadane over w - delta. Restarting when the running sum is tied with zero
// keeps the shortest optimum ending at each position.
inline Interval kadane(std::span<const double> w, double delta) {
    double cur = w[0] - delta;
    std::size_t cur_lo = 0;
    double best = cur;
    Interval best_iv{0, 0};
    for (std::size_t t = 1; t < w.size(); ++t) {
        const double x = w[t] - delta;
        if (cur > 0.0 && !tied(cur, 0.0)) {
            cur += x;
        } else {
            cur = x;
            cur_lo = t;
        }
        if (better_candidate(cur, t - cur_lo + 1, cur_lo, best, best_iv.length(), best_iv.lo)) {
            best = cur;
            best_iv = {cur_lo, t};
        }
    }
    return best_iv;
}

}  // namespace detail

/// Maximum-sum nonempty interval in O(N).
inline Solution max_subarray(std::span<const double> w) {
    validate_weights(w);
    return detail::make_solution(w, detail::kadane(w, 0.0), 0.0);
}

/// Maximum of sum(w_t - delta); raw_weight is reported against the original w.
inline Solution max_subarray_penalized(std::span<const double> w, double delta) {
    validate_weights(w);
    if (!std::isfinite(delta)) throw InvalidInput("penalty delta must be finite");
    return detail::make_solution(w, detail::kadane(w, delta), delta);
}

/// Maximum-sum interval among those of length <= max_len.
///
/// Runs over prefix sums keeping a monotone deque of candidate start
/// prefixes inside the sliding window, so time is O(N) and the auxiliary
/// storage is bounded by the window size. Equal prefixes keep the later
/// index, which yields the shortest interval for each end position.
inline Solution max_subarray_constrained(std::span<const double> w, std::size_t max_len) {
    validate_weights(w);
    if (max_len < 1 || max_len > w.size()) {
        throw InvalidInput("length budget K=" + std::to_string(max_len) + " must lie in [1," +
                           std::to_string(w.size()) + "]");
    }
    struct Entry {
        std::size_t index;
        double prefix;
    };
    std::deque<Entry> window;
    window.push_back({0, 0.0});

    double prefix = 0.0;
    double best = 0.0;
    Interval best_iv{0, 0};
    bool have_best = false;
    for (std::size_t end = 1; end <= w.size(); ++end) {
        prefix += w[end - 1];
        while (window.front().index + max_len < end) window.pop_front();
        const Entry& start = window.front();
        const double sum = prefix - start.prefix;
        const Interval iv{start.index, end - 1};
        if (!have_best || better_candidate(sum, iv.length(), iv.lo, best, best_iv.length(), best_iv.lo)) {
            best = sum;
            best_iv = iv;
            have_best = true;
        }
        while (!window.empty() && (window.back().prefix >= prefix || tied(window.back().prefix, prefix))) {
            window.pop_back();
        }
        window.push_back({end, prefix});
    }
    return detail::make_solution(w, best_iv, 0.0);
}

/// Generalized log-likelihood ratio for "an elevated interval exists":
/// (eta1 - eta0) * max(0, best penalized sum). Zero stands for the empty
/// interval under the null.
inline double glr_statistic(std::span<const double> w, double eta0, double eta1, double delta) {
    if (!(eta1 > eta0)) throw InvalidInput("GLR statistic requires eta0 < eta1");
    const Solution s = max_subarray_penalized(w, delta);
    return (eta1 - eta0) * std::max(0.0, s.penalized_weight);
}

}  // namespace maxsub
