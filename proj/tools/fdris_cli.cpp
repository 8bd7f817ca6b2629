#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "fdris/format.hpp"
#include "fdris/sweep.hpp"

namespace fs = std::filesystem;

namespace fdris {
namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required) {
    auto* opt = cmd->add_option("--config", args.config_path, "Scenario file (JSON)");
    if (config_required) opt->required();
    cmd->add_option("--out-dir", args.out_dir,
                    "Output directory, created if missing (default: .)");
    cmd->add_option("--seed", args.seed, "Override the scenario seed");
    cmd->add_option("--threads", args.threads, "Worker threads, 0 = all cores");
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string meta_line(std::uint64_t seed, const std::string& hash) {
    std::ostringstream out;
    out << tool_name << ' ' << tool_version << " seed=" << seed << " config=" << hash;
    return out.str();
}

ScenarioConfig load_resolved(const CommonArgs& args) {
    ScenarioConfig cfg = load_config_file(args.config_path);
    if (args.seed) cfg.seed = *args.seed;
    return resolve(cfg);
}

int run_optimize(const CommonArgs& args) {
    const ScenarioConfig cfg = load_resolved(args);
    const RunRecord rec = optimize_once(cfg, resolve_threads(args.threads));

    fs::create_directories(args.out_dir);
    const fs::path out(args.out_dir);
    write_file(out / "record.json", json_text(record_json(rec)));

    std::ostringstream summary;
    summary << tool_name << ' ' << tool_version << "\n"
            << "command: optimize\n"
            << "method: " << rec.method << "\n"
            << "seed: " << rec.seed << "\n"
            << "config: " << rec.hash << "\n"
            << "best rate [bits/s/Hz]: " << fmt_g(rec.best_rate) << "\n"
            << "best mod freq [Hz]: " << fmt_g(rec.best_freq) << "\n"
            << "iterations: " << rec.history.size() << "\n";
    write_file(out / "summary.txt", summary.str());

    std::cout << rec.method << " seed=" << rec.seed << " config=" << rec.hash
              << " rate=" << fmt_g(rec.best_rate)
              << " f0=" << fmt_g(rec.best_freq) << " iters=" << rec.history.size()
              << " wall=" << rec.wall_ms << "ms\n";
    return 0;
}

struct PatternArgs {
    CommonArgs common;
    std::string record_path;
    std::string ris_record_path;
    bool no_path_loss = false;
    GridSpec grid;
};

RunRecord load_record(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open record file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("record file " + path + ": " + e.what());
    }
    RunRecord rec = record_from_json(j);
    const int elements = rec.config.rows * rec.config.cols;
    if (rec.best_codes.elements != elements || rec.best_codes.slots != rec.config.slots) {
        throw ConfigError("record file " + path +
                          ": codes do not match the embedded scenario");
    }
    return rec;
}

PatternGrid pattern_for(const RunRecord& rec, const PatternArgs& args, int threads) {
    const ScenarioConfig& cfg = rec.config;
    const ModulationScheme scheme(cfg.slots, rec.best_freq, cfg.truncation);
    const EvaluationContext ctx{cfg.eval.obs_time_s.value()};
    return beam_pattern(rec.best_codes, PhaseAlphabet(cfg.bits), scheme,
                        make_geometry(cfg), args.grid, !args.no_path_loss, ctx,
                        cfg.tx_dbm, threads);
}

int nearest_index(const std::vector<double>& axis, double value) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(axis.size()); ++i) {
        if (std::abs(axis[i] - value) < std::abs(axis[best] - value)) best = i;
    }
    return best;
}

struct PatternStats {
    double peak = 0.0;
    double peak_dist = 0.0;
    double peak_az = 0.0;
    double target = 0.0;
    double target_dist = 0.0;
    double target_az = 0.0;
};

PatternStats pattern_stats(const PatternGrid& grid, const PlacementConfig& user) {
    PatternStats st;
    for (int di = 0; di < static_cast<int>(grid.distances.size()); ++di) {
        for (int ai = 0; ai < static_cast<int>(grid.azimuths.size()); ++ai) {
            const double v = grid.at(di, ai);
            if (v > st.peak) {
                st.peak = v;
                st.peak_dist = grid.distances[di];
                st.peak_az = grid.azimuths[ai];
            }
        }
    }
    const int ti = nearest_index(grid.distances, user.distance_m);
    const int tj = nearest_index(grid.azimuths, user.azimuth_deg);
    st.target = grid.at(ti, tj);
    st.target_dist = grid.distances[ti];
    st.target_az = grid.azimuths[tj];
    return st;
}

nlohmann::json stats_json(const PatternStats& st) {
    return {{"peak_power", st.peak},
            {"peak_distance_m", st.peak_dist},
            {"peak_azimuth_deg", st.peak_az},
            {"target_power", st.target},
            {"target_distance_m", st.target_dist},
            {"target_azimuth_deg", st.target_az}};
}

int run_pattern(const PatternArgs& args) {
    if (!args.ris_record_path.empty() && args.record_path.empty()) {
        throw ConfigError("--ris-record needs --record");
    }
    if (args.record_path.empty() && args.common.config_path.empty()) {
        throw ConfigError("pattern needs --config or --record");
    }
    const int threads = resolve_threads(args.common.threads);

    RunRecord rec;
    if (!args.record_path.empty()) {
        rec = load_record(args.record_path);
    } else {
        // Without an optimized record: a uniform surface (every slot on the
        // unit phase) at the middle of the modulation band.
        const ScenarioConfig cfg = load_resolved(args.common);
        rec.method = "none";
        rec.seed = cfg.seed;
        rec.config = cfg;
        rec.hash = config_hash(cfg);
        rec.best_freq = 0.5 * (cfg.freq_min_hz + cfg.freq_max_hz);
        rec.best_codes = ReflectionCodes::filled(
            cfg.rows * cfg.cols, cfg.slots, PhaseAlphabet(cfg.bits).size() - 1);
    }

    fs::create_directories(args.common.out_dir);
    const fs::path out(args.common.out_dir);

    const PatternGrid grid = pattern_for(rec, args, threads);
    const PatternStats stats = pattern_stats(grid, rec.config.user);
    write_file(out / "pattern.csv", pattern_csv(grid, meta_line(rec.seed, rec.hash)));
    write_file(out / "pattern.json", json_text(pattern_json(grid, rec.seed, rec.hash)));

    std::ostringstream summary;
    summary << tool_name << ' ' << tool_version << "\n"
            << "command: pattern\n"
            << "seed: " << rec.seed << "\n"
            << "config: " << rec.hash << "\n"
            << "path loss: " << (args.no_path_loss ? "off" : "on") << "\n"
            << "grid: " << grid.distances.size() << " x " << grid.azimuths.size()
            << " at elevation " << fmt_g(grid.elevation_deg) << " deg\n"
            << "peak power [W]: " << fmt_g(stats.peak) << " at ("
            << fmt_g(stats.peak_dist) << " m, " << fmt_g(stats.peak_az) << " deg)\n"
            << "target power [W]: " << fmt_g(stats.target) << " at ("
            << fmt_g(stats.target_dist) << " m, " << fmt_g(stats.target_az)
            << " deg)\n";

    if (!args.ris_record_path.empty()) {
        const RunRecord ris = load_record(args.ris_record_path);
        const PatternGrid ris_grid = pattern_for(ris, args, threads);
        const PatternStats ris_stats = pattern_stats(ris_grid, ris.config.user);
        write_file(out / "ris_pattern.csv",
                   pattern_csv(ris_grid, meta_line(ris.seed, ris.hash)));
        write_file(out / "ris_pattern.json",
                   json_text(pattern_json(ris_grid, ris.seed, ris.hash)));

        nlohmann::json ratio = {
            {"tool", {{"name", tool_name}, {"version", tool_version}}},
            {"seed", rec.seed},
            {"config_hash", rec.hash},
            {"ris_seed", ris.seed},
            {"ris_config_hash", ris.hash},
            {"fdris", stats_json(stats)},
            {"ris", stats_json(ris_stats)},
            {"peak_ratio", stats.peak / ris_stats.peak},
            {"target_ratio", stats.target / ris_stats.target}};
        write_file(out / "ratio.json", json_text(ratio));
        summary << "ris peak power [W]: " << fmt_g(ris_stats.peak) << "\n"
                << "ris target power [W]: " << fmt_g(ris_stats.target) << "\n"
                << "peak ratio: " << fmt_g(stats.peak / ris_stats.peak) << "\n"
                << "target ratio: " << fmt_g(stats.target / ris_stats.target) << "\n";
        std::cout << "pattern seed=" << rec.seed << " config=" << rec.hash
                  << " peak=" << fmt_g(stats.peak)
                  << " target_ratio=" << fmt_g(stats.target / ris_stats.target)
                  << "\n";
    } else {
        std::cout << "pattern seed=" << rec.seed << " config=" << rec.hash
                  << " peak=" << fmt_g(stats.peak) << " at ("
                  << fmt_g(stats.peak_dist) << " m, " << fmt_g(stats.peak_az)
                  << " deg)\n";
    }
    write_file(out / "summary.txt", summary.str());
    return 0;
}

struct SweepArgs {
    CommonArgs common;
    std::string axis;
    std::vector<double> values;
    std::vector<std::string> methods = {"fdris-ceo", "ris-ceo"};
    int trials = 5;
};

int run_sweep_cmd(const SweepArgs& args) {
    ScenarioConfig cfg = load_config_file(args.common.config_path);
    if (args.common.seed) cfg.seed = *args.common.seed;

    SweepSpec spec;
    spec.axis = args.axis;
    spec.values = args.values;
    spec.methods = args.methods;
    spec.trials = args.trials;

    const SweepResult result =
        run_sweep(cfg, spec, resolve_threads(args.common.threads));
    const std::string hash = config_hash(result.base);

    fs::create_directories(args.common.out_dir);
    const fs::path out(args.common.out_dir);
    write_file(out / "sweep.csv", sweep_csv(result, meta_line(result.base.seed, hash)));

    nlohmann::json j = sweep_json(result, result.base.seed, hash);
    std::ostringstream gains;
    for (const std::string& method : spec.methods) {
        if (method.rfind("fdris-", 0) != 0) continue;
        for (const std::string& baseline : spec.methods) {
            if (baseline.rfind("ris-", 0) != 0) continue;
            const auto gain = db_equivalent_gain(result, method, baseline);
            if (!gain) continue;
            j["db_equivalent_gain"][method + " vs " + baseline] = *gain;
            gains << "db-equivalent gain, " << method << " vs " << baseline << ": "
                  << fmt_g(*gain) << " dB\n";
        }
    }
    write_file(out / "sweep.json", json_text(j));

    std::ostringstream table;
    table << "axis_value  method      mean_rate    std_rate\n";
    for (const SweepCell& cell : result.cells) {
        char line[128];
        std::snprintf(line, sizeof(line), "%-11g %-11s %-12.6g %-12.6g\n",
                      cell.axis_value, cell.method.c_str(), cell.mean_rate,
                      cell.std_rate);
        table << line;
    }

    std::ostringstream summary;
    summary << tool_name << ' ' << tool_version << "\n"
            << "command: sweep\n"
            << "axis: " << spec.axis << "\n"
            << "trials: " << spec.trials << "\n"
            << "seed: " << result.base.seed << "\n"
            << "config: " << hash << "\n"
            << table.str() << gains.str();
    write_file(out / "summary.txt", summary.str());

    std::cout << "sweep axis=" << spec.axis << " seed=" << result.base.seed
              << " config=" << hash << "\n"
              << table.str() << gains.str();
    return 0;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"Desk-scale simulator for time-modulated reflecting surfaces"};
    app.require_subcommand(1);

    CommonArgs opt_args;
    CLI::App* opt = app.add_subcommand(
        "optimize", "Run the configured optimizer and write a run record");
    add_common(opt, opt_args, true);

    PatternArgs pat_args;
    CLI::App* pat = app.add_subcommand(
        "pattern", "Received-power map over a distance x azimuth grid");
    add_common(pat, pat_args.common, false);
    pat->add_option("--record", pat_args.record_path,
                    "Run record supplying the codes and modulation frequency");
    pat->add_option("--ris-record", pat_args.ris_record_path,
                    "Second record (static surface) for the power-ratio report");
    pat->add_flag("--no-path-loss", pat_args.no_path_loss,
                  "Drop the distance-loss factors (keeps sqrt tx power)");
    pat->add_option("--dist-min", pat_args.grid.dist_min, "Grid distance start [m]");
    pat->add_option("--dist-max", pat_args.grid.dist_max, "Grid distance end [m]");
    pat->add_option("--dist-points", pat_args.grid.dist_points, "Distance samples");
    pat->add_option("--az-min", pat_args.grid.az_min_deg, "Grid azimuth start [deg]");
    pat->add_option("--az-max", pat_args.grid.az_max_deg, "Grid azimuth end [deg]");
    pat->add_option("--az-points", pat_args.grid.az_points, "Azimuth samples");
    pat->add_option("--elevation", pat_args.grid.elevation_deg,
                    "Grid elevation [deg]");

    SweepArgs sw_args;
    CLI::App* sw = app.add_subcommand(
        "sweep", "Compare methods across one experiment axis");
    add_common(sw, sw_args.common, true);
    sw->add_option("--vary", sw_args.axis, "Axis: S, P, or bits")->required();
    sw->add_option("--values", sw_args.values, "Axis values")
        ->required()
        ->delimiter(',');
    sw->add_option("--methods", sw_args.methods,
                   "Methods: fdris-ceo fdris-ga ris-ceo ris-ga ris-oracle")
        ->delimiter(',');
    sw->add_option("--trials", sw_args.trials, "Seeded trials per cell (default 5)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (opt->parsed()) return run_optimize(opt_args);
    if (pat->parsed()) return run_pattern(pat_args);
    return run_sweep_cmd(sw_args);
}

}  // namespace
}  // namespace fdris

int main(int argc, char** argv) {
    try {
        return fdris::dispatch(argc, argv);
    } catch (const fdris::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
