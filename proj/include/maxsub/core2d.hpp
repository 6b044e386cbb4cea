#pragma once

// 2D maximum-subrectangle search and iterative detection with masking.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "maxsub/core1d.hpp"
#include "maxsub/error.hpp"

namespace maxsub {

/// Dense row-major matrix of finite reals.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), values_(rows * cols, fill) {
        check_shape();
    }
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
        : rows_(rows), cols_(cols), values_(std::move(values)) {
        check_shape();
        if (values_.size() != rows_ * cols_) {
            throw InvalidInput("matrix expects " + std::to_string(rows_ * cols_) + " values, got " +
                               std::to_string(values_.size()));
        }
        for (double v : values_) {
            if (!std::isfinite(v)) throw InvalidInput("matrix values must be finite");
        }
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return values_.size(); }

    double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
    double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }

    std::span<const double> values() const noexcept { return values_; }

private:
    void check_shape() const {
        if (rows_ == 0 || cols_ == 0) throw InvalidInput("matrix must have at least one row and column");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

struct Rect {
    std::size_t top = 0;
    std::size_t left = 0;
    std::size_t bottom = 0;
    std::size_t right = 0;

    constexpr std::size_t height() const noexcept { return bottom - top + 1; }
    constexpr std::size_t width() const noexcept { return right - left + 1; }
    constexpr std::size_t area() const noexcept { return height() * width(); }
    constexpr bool contains(std::size_t r, std::size_t c) const noexcept {
        return top <= r && r <= bottom && left <= c && c <= right;
    }
    constexpr bool intersects(const Rect& o) const noexcept {
        return top <= o.bottom && o.top <= bottom && left <= o.right && o.left <= right;
    }
    friend constexpr bool operator==(const Rect&, const Rect&) = default;
};

/// Lexicographic order on (top, left, bottom, right).
constexpr bool rect_lex_less(const Rect& a, const Rect& b) noexcept {
    return std::tie(a.top, a.left, a.bottom, a.right) < std::tie(b.top, b.left, b.bottom, b.right);
}

struct RectSolution {
    Rect rect;
    double penalized_weight = 0.0;
    double raw_weight = 0.0;
};

/// Row-by-row sum of m over r, minus delta per cell.
inline double rect_sum(const Matrix& m, const Rect& r, double delta = 0.0) {
    double s = 0.0;
    for (std::size_t i = r.top; i <= r.bottom; ++i) {
        for (std::size_t j = r.left; j <= r.right; ++j) s += m(i, j) - delta;
    }
    return s;
}

namespace detail {

// Exact optimum of sum(value - delta) over all rectangles. For every row
// pair the column sums collapse the band into a 1D Kadane run; for a fixed
// band the shortest-then-leftmost 1D tie-break is the smallest-area,
// lexicographically-first choice.
inline Rect best_rect(const Matrix& m, double delta) {
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    std::vector<double> band(cols);

    Rect best_rect{0, 0, 0, 0};
    double best = 0.0;
    bool have_best = false;
    for (std::size_t top = 0; top < rows; ++top) {
        std::fill(band.begin(), band.end(), 0.0);
        for (std::size_t bottom = top; bottom < rows; ++bottom) {
            const double height_penalty = delta * static_cast<double>(bottom - top + 1);
            for (std::size_t c = 0; c < cols; ++c) band[c] += m(bottom, c);

            double cur = band[0] - height_penalty;
            std::size_t cur_left = 0;
            double row_best = cur;
            std::size_t row_left = 0;
            std::size_t row_right = 0;
            for (std::size_t c = 1; c < cols; ++c) {
                const double x = band[c] - height_penalty;
                if (cur > 0.0 && !tied(cur, 0.0)) {
                    cur += x;
                } else {
                    cur = x;
                    cur_left = c;
                }
                if (better_candidate(cur, c - cur_left + 1, cur_left, row_best, row_right - row_left + 1,
                                     row_left)) {
                    row_best = cur;
                    row_left = cur_left;
                    row_right = c;
                }
            }

            const Rect cand{top, row_left, bottom, row_right};
            bool take = !have_best;
            if (!take) {
                if (!tied(row_best, best)) {
                    take = row_best > best;
                } else if (cand.area() != best_rect.area()) {
                    take = cand.area() < best_rect.area();
                } else {
                    take = rect_lex_less(cand, best_rect);
                }
            }
            if (take) {
                best = row_best;
                best_rect = cand;
                have_best = true;
            }
        }
    }
    return best_rect;
}

}  // namespace detail

/// Exact maximum of sum(value - delta) over axis-aligned rectangles, O(R^2 C).
/// Ties prefer the smaller area, then lexicographic (top, left, bottom, right).
inline RectSolution max_subrect_penalized(const Matrix& m, double delta) {
    if (m.size() == 0) throw InvalidInput("matrix is empty");
    if (!std::isfinite(delta)) throw InvalidInput("penalty delta must be finite");
    const Rect r = detail::best_rect(m, delta);
    return RectSolution{r, rect_sum(m, r, delta), rect_sum(m, r)};
}

/// Repeatedly extracts the best rectangle, masking every detected cell so no
/// later rectangle can contain it. Stops once the best penalized weight is
/// <= 0 or max_regions rectangles have been found.
inline std::vector<RectSolution> detect_regions(const Matrix& m, double delta, std::size_t max_regions) {
    if (m.size() == 0) throw InvalidInput("matrix is empty");
    if (!std::isfinite(delta)) throw InvalidInput("penalty delta must be finite");
    if (max_regions < 1) throw InvalidInput("max_regions must be positive");

    double abs_total = 0.0;
    for (double v : m.values()) abs_total += std::abs(v);
    // Any rectangle holding a masked cell sums to at most -1 after the shift.
    const double sentinel = -(1.0 + abs_total + std::abs(delta) * static_cast<double>(m.size()));

    Matrix work = m;
    std::vector<RectSolution> found;
    while (found.size() < max_regions) {
        const Rect r = detail::best_rect(work, delta);
        const double penalized = rect_sum(work, r, delta);
        if (penalized <= 0.0) break;
        found.push_back(RectSolution{r, rect_sum(m, r, delta), rect_sum(m, r)});
        for (std::size_t i = r.top; i <= r.bottom; ++i) {
            for (std::size_t j = r.left; j <= r.right; ++j) work(i, j) = sentinel;
        }
    }
    return found;
}

}  // namespace maxsub
