#pragma once

#include <cstdio>
#include <string>

namespace fdris {

// %.10g keeps CSV readable; identical inputs always format to identical text.
inline std::string fmt_g(double v, int digits = 10) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

}  // namespace fdris
