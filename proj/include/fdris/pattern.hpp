#pragma once

#include <string>

#include "fdris/scenario.hpp"

// Received-power maps over a (distance, azimuth) grid at fixed elevation and
// fixed observation time, plus the exact quantized baseline for a static
// (single-slot) surface.

namespace fdris {

// Grid axes are human-facing: meters and degrees.
struct GridSpec {
    double dist_min = 50.0;
    double dist_max = 300.0;
    int dist_points = 101;
    double az_min_deg = -90.0;
    double az_max_deg = 90.0;
    int az_points = 181;
    double elevation_deg = 90.0;
};

struct PatternGrid {
    std::vector<double> distances;  // [m]
    std::vector<double> azimuths;   // [deg]
    double elevation_deg = 90.0;
    std::vector<double> values;     // |gain|^2 [W], distance-major

    double at(int dist_idx, int az_idx) const {
        return values[static_cast<std::size_t>(dist_idx) * azimuths.size() + az_idx];
    }
};

// Sweeps the user placement over the grid with everything else (codes, f0,
// BS geometry, observation time) held fixed.  With path loss off, both eta
// factors are 1 while sqrt(P) is kept.
PatternGrid beam_pattern(const ReflectionCodes& codes, const PhaseAlphabet& alphabet,
                         const ModulationScheme& scheme, const LinkGeometry& geometry,
                         const GridSpec& grid, bool include_path_loss,
                         const EvaluationContext& ctx, double tx_power_dbm,
                         int threads = 1);

// CSV with a leading '#' metadata line, then "distance,azimuth,power" rows.
std::string pattern_csv(const PatternGrid& grid, const std::string& meta);

double rate_from_gain(cplx gain, double noise_power);

// Exact best static quantized assignment: maximizes |sum_s w_s * phi(q_s)|
// with w_s = conj(h_br_s) * h_ru_s over all alphabet choices q_s.
struct RisOracle {
    std::vector<int> phase_idx;
    cplx gain{0.0, 0.0};
};

RisOracle ris_quantized_oracle(const ChannelPair& pair, const PhaseAlphabet& alphabet);

}  // namespace fdris
