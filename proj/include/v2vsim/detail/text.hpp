// v2vsim/detail/text.hpp - small text and number helpers shared by the parsers and writers
#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "v2vsim/error.hpp"

namespace v2vsim::detail {

inline std::string_view trim(std::string_view s) {
    const char* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

// Strict decimal parse of the whole (trimmed) token. `what` names the value
// in the error message, e.g. "attribute 'x'".
inline double parse_double(std::string_view token, std::string_view what, std::size_t line = 0) {
    auto t = trim(token);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw ParseError("invalid number for " + std::string(what) + ": '" + std::string(token) + "'",
                         line);
    }
    return value;
}

inline long long parse_int(std::string_view token, std::string_view what, std::size_t line = 0) {
    auto t = trim(token);
    long long value = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw ParseError("invalid integer for " + std::string(what) + ": '" + std::string(token) + "'",
                         line);
    }
    return value;
}

// Shortest decimal form that parses back to the exact same double.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace v2vsim::detail
