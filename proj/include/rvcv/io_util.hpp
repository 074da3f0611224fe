#pragma once

#include <cstdio>
#include <string>

namespace rvcv {

/// Shortest-round-trip decimal formatting, identical across runs so report
/// files can be compared byte for byte.
inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace rvcv
