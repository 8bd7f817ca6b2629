#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

// Minimal draws on top of mt19937_64 with fixed stream consumption, so run
// records replay identically across compilers and standard libraries.

namespace fdris {

// Uniform on [0, 1), 53-bit resolution, one engine call.
inline double uniform_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller; always consumes exactly two engine calls.
inline double normal_double(std::mt19937_64& rng) {
    const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;          // [0, 1)
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

// Uniform integer in [0, n); one engine call.
inline int uniform_index(std::mt19937_64& rng, int n) {
    const double u = uniform_double(rng);
    int k = static_cast<int>(u * n);
    return k < n ? k : n - 1;
}

}  // namespace fdris
