#pragma once

// Penalized vs. length-constrained solutions: frontiers in (length, weight)
// space, their upper convex hull, and a bisection on the penalty that meets a
// length budget.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maxsub/core1d.hpp"
#include "maxsub/error.hpp"

namespace maxsub {

/// One solution summarized by its length and raw weight. Exactly one of
/// budget / delta records which problem produced it.
struct FrontierPoint {
    std::optional<std::size_t> budget;
    std::optional<double> delta;
    Interval interval;
    std::size_t length = 0;
    double raw_weight = 0.0;
};

struct HullPoint {
    std::size_t length = 0;
    double weight = 0.0;
    friend bool operator==(const HullPoint&, const HullPoint&) = default;
};

/// Exact w*(K) for every K = 1..N. O(N^2).
inline std::vector<FrontierPoint> constrained_frontier(std::span<const double> w) {
    validate_weights(w);
    std::vector<FrontierPoint> out;
    out.reserve(w.size());
    for (std::size_t k = 1; k <= w.size(); ++k) {
        const Solution s = max_subarray_constrained(w, k);
        out.push_back(FrontierPoint{k, std::nullopt, s.interval, s.length(), s.raw_weight});
    }
    return out;
}

/// Penalized solutions for each delta, in input order, with repeated
/// (length, raw_weight) points dropped.
inline std::vector<FrontierPoint> penalized_frontier(std::span<const double> w, std::span<const double> deltas) {
    validate_weights(w);
    std::vector<FrontierPoint> out;
    for (double d : deltas) {
        const Solution s = max_subarray_penalized(w, d);
        const bool seen = std::any_of(out.begin(), out.end(), [&](const FrontierPoint& p) {
            return p.length == s.length() && tied(p.raw_weight, s.raw_weight);
        });
        if (!seen) out.push_back(FrontierPoint{std::nullopt, d, s.interval, s.length(), s.raw_weight});
    }
    return out;
}

namespace detail {

inline constexpr double kHullQuantum = 1e-9;

// Weights are snapped to multiples of kHullQuantum and all orientation tests
// run in exact integer arithmetic on the snapped values.
inline std::int64_t quantize(double w) {
    if (!(std::abs(w) < 9.0e9)) throw InvalidInput("hull weights must be finite with magnitude below 9e9");
    return std::llround(w / kHullQuantum);
}

struct QPoint {
    std::int64_t x;
    std::int64_t y;
};

inline __int128 cross(const QPoint& o, const QPoint& a, const QPoint& b) {
    return static_cast<__int128>(a.x - o.x) * (b.y - o.y) - static_cast<__int128>(a.y - o.y) * (b.x - o.x);
}

}  // namespace detail

/// Vertices of the upper convex hull in increasing length (monotone chain).
/// Points sharing a length keep the heaviest; collinear interior points are
/// not vertices.
inline std::vector<HullPoint> upper_convex_hull(std::span<const HullPoint> points) {
    if (points.empty()) throw InvalidInput("convex hull of an empty point set");
    std::map<std::size_t, double> best;
    for (const HullPoint& p : points) {
        auto [it, inserted] = best.emplace(p.length, p.weight);
        if (!inserted) it->second = std::max(it->second, p.weight);
    }
    std::vector<HullPoint> chain;
    std::vector<detail::QPoint> qchain;
    for (const auto& [len, wt] : best) {
        const detail::QPoint q{static_cast<std::int64_t>(len), detail::quantize(wt)};
        while (qchain.size() >= 2 && detail::cross(qchain[qchain.size() - 2], qchain.back(), q) >= 0) {
            qchain.pop_back();
            chain.pop_back();
        }
        qchain.push_back(q);
        chain.push_back(HullPoint{len, wt});
    }
    return chain;
}

/// True when p lies on the upper hull (a vertex or on an edge), allowing one
/// quantum of slack for rounding.
inline bool on_upper_hull(std::span<const HullPoint> hull, const HullPoint& p) {
    if (hull.empty() || p.length < hull.front().length || p.length > hull.back().length) return false;
    const detail::QPoint q{static_cast<std::int64_t>(p.length), detail::quantize(p.weight)};
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const detail::QPoint a{static_cast<std::int64_t>(hull[i].length), detail::quantize(hull[i].weight)};
        if (hull[i].length == p.length) return q.y >= a.y - 1;
        if (i + 1 < hull.size() && hull[i + 1].length > p.length) {
            const detail::QPoint b{static_cast<std::int64_t>(hull[i + 1].length),
                                   detail::quantize(hull[i + 1].weight)};
            // p is on segment ab iff it is not strictly below the line, up to one quantum.
            const __int128 dx = b.x - a.x;
            const __int128 lhs = static_cast<__int128>(q.y - a.y) * dx;
            const __int128 rhs = static_cast<__int128>(b.y - a.y) * (q.x - a.x);
            return lhs >= rhs - dx;
        }
    }
    return false;
}

inline bool is_hull_vertex(std::span<const HullPoint> hull, const HullPoint& p) {
    const std::int64_t qy = detail::quantize(p.weight);
    return std::any_of(hull.begin(), hull.end(), [&](const HullPoint& v) {
        return v.length == p.length && std::abs(detail::quantize(v.weight) - qy) <= 1;
    });
}

struct BudgetResult {
    Solution solution;
    double delta_used = 0.0;       // smallest feasible penalty evaluated
    double incumbent_delta = 0.0;  // penalty that produced `solution`
    bool feasible = false;
    std::optional<double> gap;     // exact constrained optimum minus solution raw weight
    std::size_t evaluations = 0;
};

inline double default_budget_tolerance(std::span<const double> w) {
    double m = 0.0;
    for (double x : w) m = std::max(m, std::abs(x));
    return 1e-6 * (1.0 + m);
}

/// Bisection on delta for the smallest penalty whose solution has length <= K.
///
/// The incumbent is the heaviest feasible solution seen at any evaluated
/// penalty. The result is always feasible but can fall short of the exact
/// length-constrained optimum; `gap` records by how much.
inline BudgetResult solve_with_length_budget(std::span<const double> w, std::size_t max_len,
                                             std::optional<double> tol = std::nullopt) {
    validate_weights(w);
    if (max_len < 1 || max_len > w.size()) {
        throw InvalidInput("length budget K=" + std::to_string(max_len) + " must lie in [1," +
                           std::to_string(w.size()) + "]");
    }
    const double eps = tol.value_or(default_budget_tolerance(w));
    if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidInput("bisection tolerance must be positive");

    BudgetResult result;
    const auto consider = [&](const Solution& s, double d) {
        ++result.evaluations;
        if (s.length() > max_len) return false;
        if (!result.feasible || s.raw_weight > result.solution.raw_weight ||
            tied(s.raw_weight, result.solution.raw_weight)) {
            result.solution = s;
            result.incumbent_delta = d;
        }
        result.feasible = true;
        return true;
    };

    double lo = 0.0;
    if (consider(max_subarray_penalized(w, lo), lo)) {
        result.delta_used = lo;
    } else {
        double hi = std::max(0.0, *std::max_element(w.begin(), w.end())) + eps;
        consider(max_subarray_penalized(w, hi), hi);  // every element shifted negative: length 1
        while (hi - lo > eps) {
            const double mid = 0.5 * (lo + hi);
            if (consider(max_subarray_penalized(w, mid), mid)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        result.delta_used = hi;
    }
    result.gap = max_subarray_constrained(w, max_len).raw_weight - result.solution.raw_weight;
    return result;
}

/// Per-row flags for the constrained frontier.
struct HullRow {
    FrontierPoint point;
    bool on_hull = false;
    bool is_vertex = false;
    bool attained_by_delta = false;
};

struct HullReport {
    std::vector<HullRow> rows;                 // one per K = 1..N
    std::vector<FrontierPoint> penalized;      // one per distinct breakpoint solution
    std::vector<HullPoint> hull;
    std::vector<double> breakpoints;
    bool penalized_on_hull = true;             // every penalized point on the hull
    bool vertices_attained = true;             // every hull vertex hit by some delta
};

/// Candidate penalties at which the penalized optimum can change: all
/// pairwise slopes between frontier points of distinct length, plus 0 and
/// max(w) + 1.
inline std::vector<double> breakpoint_deltas(std::span<const double> w, std::span<const HullPoint> frontier) {
    std::map<std::size_t, double> by_len;
    for (const HullPoint& p : frontier) {
        auto [it, inserted] = by_len.emplace(p.length, p.weight);
        if (!inserted) it->second = std::max(it->second, p.weight);
    }
    std::vector<HullPoint> pts;
    for (const auto& [l, v] : by_len) pts.push_back({l, v});

    std::vector<double> deltas{0.0, *std::max_element(w.begin(), w.end()) + 1.0};
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            deltas.push_back((pts[j].weight - pts[i].weight) /
                             (static_cast<double>(pts[j].length) - static_cast<double>(pts[i].length)));
        }
    }
    std::sort(deltas.begin(), deltas.end());
    deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());
    return deltas;
}

/// Checks that penalized solutions sit on the upper hull of the constrained
/// frontier and that every hull vertex is reached by some penalty.
inline HullReport hull_check(std::span<const double> w) {
    validate_weights(w);
    HullReport report;
    const std::vector<FrontierPoint> constrained = constrained_frontier(w);
    std::vector<HullPoint> cpoints;
    cpoints.reserve(constrained.size());
    for (const FrontierPoint& p : constrained) cpoints.push_back({p.length, p.raw_weight});

    report.hull = upper_convex_hull(cpoints);
    report.breakpoints = breakpoint_deltas(w, cpoints);
    report.penalized = penalized_frontier(w, report.breakpoints);

    const auto attained = [&](const HullPoint& v) {
        return std::any_of(report.penalized.begin(), report.penalized.end(), [&](const FrontierPoint& p) {
            return p.length == v.length && std::abs(detail::quantize(p.raw_weight) - detail::quantize(v.weight)) <= 1;
        });
    };

    for (const FrontierPoint& p : report.penalized) {
        if (!on_upper_hull(report.hull, {p.length, p.raw_weight})) report.penalized_on_hull = false;
    }
    for (const HullPoint& v : report.hull) {
        if (!attained(v)) report.vertices_attained = false;
    }
    for (const FrontierPoint& p : constrained) {
        const HullPoint hp{p.length, p.raw_weight};
        report.rows.push_back(HullRow{p, on_upper_hull(report.hull, hp), is_hull_vertex(report.hull, hp), attained(hp)});
    }
    return report;
}

}  // namespace maxsub
