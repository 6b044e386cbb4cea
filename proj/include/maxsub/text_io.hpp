#pragma once

// Plain-text readers for weight arrays and CSV matrices. Decimal parsing is
// locale-independent ('.' separator only).

#include <charconv>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "maxsub/core2d.hpp"
#include "maxsub/error.hpp"

namespace maxsub {

namespace detail {

inline std::string_view trim(std::string_view s) noexcept {
    const auto first = s.find_first_not_of(" \t\r\f\v");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\f\v");
    return s.substr(first, last - first + 1);
}

inline double parse_number(std::string_view token, std::size_t line_no) {
    token = trim(token);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double value = 0.0;
    const char* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value, std::chars_format::general);
    if (token.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw InvalidInput("line " + std::to_string(line_no) + ": cannot parse '" + std::string(token) +
                           "' as a finite number");
    }
    return value;
}

template <class RowFn>
void for_each_line(std::string_view text, RowFn&& fn) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        const std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        fn(trim(line), line_no);
    }
}

inline std::vector<double> parse_row(std::string_view line, std::size_t line_no) {
    std::vector<double> row;
    while (true) {
        const auto comma = line.find(',');
        row.push_back(parse_number(line.substr(0, comma), line_no));
        if (comma == std::string_view::npos) break;
        line.remove_prefix(comma + 1);
    }
    return row;
}

}  // namespace detail

/// Numbers one per line or comma-separated (or both); blank lines and
/// lines starting with '#' are skipped.
inline std::vector<double> parse_weights(std::string_view text) {
    std::vector<double> out;
    detail::for_each_line(text, [&](std::string_view line, std::size_t line_no) {
        if (line.empty() || line.front() == '#') return;
        for (double v : detail::parse_row(line, line_no)) out.push_back(v);
    });
    if (out.empty()) throw InvalidInput("input contains no numbers");
    return out;
}

/// One matrix row per non-blank line, values comma-separated.
inline Matrix parse_matrix_csv(std::string_view text) {
    std::vector<double> values;
    std::size_t rows = 0;
    std::size_t cols = 0;
    detail::for_each_line(text, [&](std::string_view line, std::size_t line_no) {
        if (line.empty() || line.front() == '#') return;
        const std::vector<double> row = detail::parse_row(line, line_no);
        if (rows == 0) cols = row.size();
        if (row.size() != cols) {
            throw InvalidInput("line " + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                               " columns, got " + std::to_string(row.size()));
        }
        values.insert(values.end(), row.begin(), row.end());
        ++rows;
    });
    if (rows == 0) throw InvalidInput("input contains no matrix rows");
    return Matrix(rows, cols, std::move(values));
}

}  // namespace maxsub
