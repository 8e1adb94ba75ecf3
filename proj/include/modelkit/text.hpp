#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace modelkit {

/// Shortest decimal text that round-trips to the same double. Integral values
/// print without a trailing ".0" (1.0 -> "1"), matching how attribute values
/// and eval results are displayed.
inline std::string number_text(double v) {
    if (v == 0.0) return "0";  // avoid "-0"
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

/// Fixed 6-decimal formatting used for all SVG coordinates.
inline std::string fixed6(double v) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace modelkit
