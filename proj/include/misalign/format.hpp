#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace misalign {

/// Shortest decimal text that parses back to exactly `v` (0.8 -> "0.8").
inline std::string format_shortest(double v)
{
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, result.ptr);
}

/// `%.{digits}g` in the C locale; -0 prints as 0.
inline std::string format_significant(double v, int digits)
{
    if (v == 0.0) v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

/// CSV field, quoted only when it contains a comma, quote or newline.
inline std::string csv_field(const std::string& value)
{
    if (value.find_first_of(",\"\n") == std::string::npos) return value;
    std::string quoted = "\"";
    for (char c : value) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + "\"";
}

}  // namespace misalign
