#pragma once

#include "edge_lca/error.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

// Small text utilities shared by the file readers and report writers.
namespace edge_lca::text {

struct Line {
    std::size_t number = 0; // 1-based
    std::string_view content;
};

// Splits on '\n', dropping a trailing '\r' so CRLF files read the same.
inline std::vector<Line> split_lines(std::string_view text)
{
    std::vector<Line> lines;
    std::size_t number = 1;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        auto content = text.substr(start, end - start);
        if (!content.empty() && content.back() == '\r') {
            content.remove_suffix(1);
        }
        if (end == text.size() && content.empty()) {
            break;
        }
        lines.push_back({number++, content});
        start = end + 1;
    }
    return lines;
}

constexpr bool is_space(char c) noexcept { return c == ' ' || c == '\t'; }

constexpr std::string_view trim(std::string_view s) noexcept
{
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

// Offset of the first non-blank character, for column reporting.
constexpr std::size_t leading_blanks(std::string_view s) noexcept
{
    std::size_t n = 0;
    while (n < s.size() && is_space(s[n])) ++n;
    return n;
}

constexpr bool is_blank_or_comment(std::string_view s) noexcept
{
    auto t = trim(s);
    return t.empty() || t.front() == '#';
}

struct Field {
    std::string_view value; // trimmed
    std::size_t column = 0; // 1-based column of the trimmed value
};

// Comma split without quoting; none of the data files need quoted fields.
inline std::vector<Field> split_fields(std::string_view line, char sep = ',')
{
    std::vector<Field> fields;
    std::size_t start = 0;
    while (true) {
        auto end = line.find(sep, start);
        auto raw = line.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        fields.push_back({trim(raw), start + leading_blanks(raw) + 1});
        if (end == std::string_view::npos) {
            break;
        }
        start = end + 1;
    }
    return fields;
}

inline std::optional<double> parse_double(std::string_view s) noexcept
{
    if (s.empty()) {
        return std::nullopt;
    }
    if (s.front() == '+') {
        s.remove_prefix(1);
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return value;
}

inline std::optional<long> parse_integer(std::string_view s) noexcept
{
    long value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return value;
}

inline double require_double(const Field& field, std::size_t line, std::string_view what)
{
    auto v = parse_double(field.value);
    if (!v) {
        throw Error(ErrorCode::ParseError,
                    "expected a number for " + std::string(what) + ", got '" + std::string(field.value) + "'",
                    {line, field.column});
    }
    return *v;
}

// Shortest representation that reads back to the same double.
inline std::string shortest(double value)
{
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

// Fixed-point rendering used by every machine-readable report.
inline std::string fixed(double value, int decimals = 2)
{
    std::array<char, 64> buf{};
    int n = std::snprintf(buf.data(), buf.size(), "%.*f", decimals, value);
    std::string out(buf.data(), static_cast<std::size_t>(n));
    if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) {
        out.erase(0, 1); // no "-0.00"
    }
    return out;
}

} // namespace edge_lca::text
