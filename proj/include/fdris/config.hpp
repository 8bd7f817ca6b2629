#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "fdris/ceo.hpp"
#include "fdris/ga.hpp"
#include "fdris/pattern.hpp"

// Scenario files are single JSON documents (comments tolerated).  Every field
// has a default, so "{}" is a valid scenario.  resolve() fills the derived
// defaults (element spacing, observation time, mutation scales) and validates;
// the resolved snapshot is what run records embed and what gets hashed.

namespace fdris {

inline constexpr const char* tool_name = "fdris";
inline constexpr const char* tool_version = "0.1.0";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PlacementConfig {
    double distance_m = 1.0;
    double elevation_deg = 90.0;
    double azimuth_deg = 0.0;
    bool operator==(const PlacementConfig&) const = default;
};

struct CeoSettings {
    int pop_size = 200;
    double elite_frac = 0.1;
    double smoothing = 0.65;
    int max_iters = 500;
    int stall_iters = 5;
    double stall_tol = 1e-4;
    bool operator==(const CeoSettings&) const = default;
};

struct GaSettings {
    int pop_size = 200;
    int generations = 500;
    int tournament_size = 4;
    double crossover_rate = 0.9;
    std::optional<double> mutation_rate_discrete;   // default 1/(S*L)
    std::optional<double> mutation_sigma_freq_hz;   // default 5% of the band
    int elitism_count = 2;
    bool operator==(const GaSettings&) const = default;
};

struct EvalSettings {
    std::string mode = "instant";  // or "time-average"
    std::optional<double> obs_time_s;  // default: user distance / c
    int period_samples = 64;
    bool operator==(const EvalSettings&) const = default;
};

struct ScenarioConfig {
    int rows = 10;
    int cols = 10;
    std::optional<double> spacing_m;  // default: half a carrier wavelength
    double carrier_hz = 28e9;
    PlacementConfig bs{30.0, 90.0, 0.0};
    PlacementConfig user{150.0, 90.0, 30.0};
    int slots = 7;
    int truncation = 3;
    int bits = 2;
    double freq_min_hz = 100e3;
    double freq_max_hz = 280e3;
    double tx_dbm = 30.0;
    double noise_dbm = -110.0;
    std::string method = "ceo";  // ceo | ga | oracle (oracle needs slots == 1)
    CeoSettings ceo;
    GaSettings ga;
    EvalSettings eval;
    std::uint64_t seed = 1;
    bool operator==(const ScenarioConfig&) const = default;
};

ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig load_config_file(const std::string& path);

// Validates and fills all derived defaults; idempotent.
ScenarioConfig resolve(const ScenarioConfig& raw);

// Serialization of a resolved snapshot; parse(config_json(x).dump()) == x.
nlohmann::json config_json(const ScenarioConfig& resolved);

// FNV-1a over the canonical serialized snapshot, as 16 hex digits.
std::string config_hash(const ScenarioConfig& resolved);

LinkGeometry make_geometry(const ScenarioConfig& resolved);
Scenario build_scenario(const ScenarioConfig& resolved);
CeoConfig make_ceo_config(const ScenarioConfig& resolved);
GaConfig make_ga_config(const ScenarioConfig& resolved);

struct RunRecord {
    std::string method;
    std::uint64_t seed = 0;
    std::string hash;
    ScenarioConfig config;  // resolved snapshot
    double best_rate = 0.0;
    double best_freq = 0.0;
    ReflectionCodes best_codes;
    std::vector<HistoryRecord> history;
    // Reported on stdout only; kept out of every output file so a rerun with
    // the same config and seed reproduces the files byte for byte.
    std::int64_t wall_ms = 0;
};

nlohmann::json record_json(const RunRecord& record);
RunRecord record_from_json(const nlohmann::json& j);

nlohmann::json pattern_json(const PatternGrid& grid, std::uint64_t seed,
                            const std::string& hash);

}  // namespace fdris
