#pragma once

#include "lowrank/types.hpp"

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <system_error>

namespace lowrank {

// Locale-independent number formatting. All file formats use '.' as the
// decimal separator regardless of the process locale, so text conversion
// goes through to_chars/from_chars exclusively.

/// Shortest decimal string that round-trips to the same double.
inline std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline std::string format_int(std::int64_t x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline std::string format_uint(std::uint64_t x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::string_view strip_spaces(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

} // namespace detail

/// Parses a decimal number (scientific notation allowed); throws InputError
/// on anything else, including trailing junk.
inline double parse_double(std::string_view token, const char* context) {
    std::string_view s = detail::strip_spaces(token);
    double value = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty())
        throw InputError(std::string(context) + ": malformed number '" + std::string(token) + "'");
    return value;
}

inline std::int64_t parse_int(std::string_view token, const char* context) {
    std::string_view s = detail::strip_spaces(token);
    std::int64_t value = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty())
        throw InputError(std::string(context) + ": malformed integer '" + std::string(token) + "'");
    return value;
}

inline std::uint64_t parse_uint(std::string_view token, const char* context) {
    std::string_view s = detail::strip_spaces(token);
    std::uint64_t value = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty())
        throw InputError(std::string(context) + ": malformed unsigned integer '" + std::string(token) + "'");
    return value;
}

} // namespace lowrank
