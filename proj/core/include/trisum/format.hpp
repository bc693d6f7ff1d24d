#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace trisum {

// Fixed 12-significant-digit float formatting for serialized reports.
inline std::string format_sig12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

inline double round_sig12(double x) {
    return std::strtod(format_sig12(x).c_str(), nullptr);
}

}  // namespace trisum
