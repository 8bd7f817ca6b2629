#pragma once

#include "fdris/config.hpp"

// Method comparison along one experiment axis (surface size, transmit power,
// or phase resolution).  Each cell runs n seeded trials; trial t of every
// method uses seed base_seed + t so the comparison is paired.

namespace fdris {

// Method names combine the surface kind with the search strategy.  The
// static-surface variants pin the modulation to a single slot, which turns
// the time-modulated model into a plain phase-shift surface.
inline constexpr const char* sweep_methods[] = {"fdris-ceo", "fdris-ga", "ris-ceo",
                                                "ris-ga", "ris-oracle"};

struct SweepSpec {
    std::string axis;  // "S" | "P" | "bits"
    std::vector<double> values;
    std::vector<std::string> methods = {"fdris-ceo", "ris-ceo"};
    int trials = 5;
};

struct SweepCell {
    std::string method;
    double axis_value = 0.0;
    std::vector<double> rates;  // one best rate per trial
    double mean_rate = 0.0;
    double std_rate = 0.0;      // sample std (n - 1 divisor), 0 for one trial
};

struct SweepResult {
    SweepSpec spec;
    ScenarioConfig base;  // resolved
    std::vector<SweepCell> cells;  // axis-major, methods in spec order
};

// Maps a sweep method name onto a concrete config (slots / optimizer choice).
ScenarioConfig apply_method(const ScenarioConfig& base, const std::string& method);

// Applies one axis value.  S picks the array layout (square when the count is
// a perfect square, a single row otherwise), P sets tx power, bits the phase
// resolution.
ScenarioConfig apply_axis(const ScenarioConfig& base, const std::string& axis,
                          double value);

// One full optimization run for a resolved config; dispatches on cfg.method.
RunRecord optimize_once(const ScenarioConfig& cfg, int threads);

SweepResult run_sweep(const ScenarioConfig& base, const SweepSpec& spec, int threads);

// Columns: axis_value,method,mean_rate,std_rate,trials after a '#' meta line.
std::string sweep_csv(const SweepResult& result, const std::string& meta);

nlohmann::json sweep_json(const SweepResult& result, std::uint64_t seed,
                          const std::string& hash);

// Mean dB-equivalent advantage of `method` over `baseline` across the axis.
// Along the power axis this interpolates the baseline's rate-vs-power curve
// to find the power offset that closes the gap; elsewhere it converts the
// rate gap through the high-SNR slope (10*log10(2) dB per bit).
std::optional<double> db_equivalent_gain(const SweepResult& result,
                                         const std::string& method,
                                         const std::string& baseline);

}  // namespace fdris
