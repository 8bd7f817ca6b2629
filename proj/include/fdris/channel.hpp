#pragma once

#include "fdris/signal.hpp"

// Geometry and narrowband channel model for a BS -> surface -> user link.
// Elements sit on an M x N grid with spacing d; plane-wave offsets toward a
// placement at (distance, elevation, azimuth) shorten each element's path by
//   offset(m, n) = (m-1) d sin(el) cos(az) + (n-1) d sin(el) sin(az).

namespace fdris {

struct ArrayLayout {
    int rows = 1;        // M
    int cols = 1;        // N
    double spacing = 0;  // d [m]

    int total() const { return rows * cols; }
    // row in 1..M, col in 1..N -> 0-based flat element index, row-major.
    int flat_index(int row, int col) const;
};

struct Placement {
    double distance = 1.0;   // [m]
    double elevation = 0.0;  // [rad]
    double azimuth = 0.0;    // [rad]
};

struct LinkGeometry {
    ArrayLayout layout;
    Placement bs;
    Placement user;
    double carrier = 28e9;  // f_c [Hz]

    static constexpr double light_speed = 299792458.0;  // [m/s]
    double wavelength() const { return light_speed / carrier; }
};

// Per-element channel coefficients plus the scalar link powers.
// h_br carries sqrt(P); per-element magnitudes are constant on each side.
struct ChannelPair {
    std::vector<cplx> h_br;
    std::vector<cplx> h_ru;
    double tx_power = 1.0;     // P [W]
    double noise_power = 1.0;  // sigma^2 [W]
};

struct EvaluationContext {
    double obs_time = 0.0;  // t [s]
};

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

// Plane-wave path shortening of element (row, col) toward the placement.
double element_offset(const ArrayLayout& layout, int row, int col,
                      const Placement& target);

// Amplitude factor of the large-scale model -30 - 22*log10(d) dB, d in meters.
double path_loss_amplitude(double distance);

ChannelPair build_channels(const LinkGeometry& geometry, double tx_power_dbm,
                           double noise_dbm);

// Equivalent reflection coefficients, one per element, at ctx.obs_time:
//   theta_s = sum_z c_z(s) * exp(j*2*pi*z*f0*(t - d_ru(s)/c))
// where d_ru(s) is the user distance minus that element's offset.
std::vector<cplx> build_theta(const ReflectionCodes& codes,
                              const PhaseAlphabet& alphabet,
                              const ModulationScheme& scheme,
                              const LinkGeometry& geometry,
                              const EvaluationContext& ctx);

// h_br^H * diag(theta) * h_ru
cplx effective_gain(const ChannelPair& pair, std::span<const cplx> theta);

}  // namespace fdris
