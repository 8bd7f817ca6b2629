#include "fdris/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "fdris/format.hpp"

namespace fdris {

ScenarioConfig apply_method(const ScenarioConfig& base, const std::string& method) {
    ScenarioConfig cfg = base;
    bool fdris = false;
    std::string strategy;
    if (method.rfind("fdris-", 0) == 0) {
        fdris = true;
        strategy = method.substr(6);
    } else if (method.rfind("ris-", 0) == 0) {
        strategy = method.substr(4);
    } else {
        throw ConfigError("unknown sweep method: " + method);
    }
    if (strategy != "ceo" && strategy != "ga" && strategy != "oracle") {
        throw ConfigError("unknown sweep method: " + method);
    }
    if (fdris && strategy == "oracle") {
        throw ConfigError("unknown sweep method: " + method);
    }
    if (!fdris) {
        cfg.slots = 1;
        cfg.truncation = 0;
    }
    cfg.method = strategy;
    return cfg;
}

ScenarioConfig apply_axis(const ScenarioConfig& base, const std::string& axis,
                          double value) {
    ScenarioConfig cfg = base;
    if (axis == "S") {
        const long long s = std::llround(value);
        if (s < 1 || std::abs(value - static_cast<double>(s)) > 1e-9) {
            throw ConfigError("sweep axis S needs positive integer values");
        }
        const long long root = std::llround(std::sqrt(static_cast<double>(s)));
        if (root * root == s) {
            cfg.rows = static_cast<int>(root);
            cfg.cols = static_cast<int>(root);
        } else {
            cfg.rows = 1;
            cfg.cols = static_cast<int>(s);
        }
    } else if (axis == "P") {
        cfg.tx_dbm = value;
    } else if (axis == "bits") {
        const long long b = std::llround(value);
        if (b < 1 || std::abs(value - static_cast<double>(b)) > 1e-9) {
            throw ConfigError("sweep axis bits needs positive integer values");
        }
        cfg.bits = static_cast<int>(b);
    } else {
        throw ConfigError("sweep axis must be one of: S, P, bits");
    }
    return cfg;
}

RunRecord optimize_once(const ScenarioConfig& cfg, int threads) {
    const ScenarioConfig resolved = resolve(cfg);
    const Scenario scenario = build_scenario(resolved);
    const auto start = std::chrono::steady_clock::now();

    RunRecord record;
    record.method = resolved.method;
    record.seed = resolved.seed;
    record.config = resolved;
    record.hash = config_hash(resolved);

    if (resolved.method == "ceo") {
        CeoState state = ceo_run(scenario, make_ceo_config(resolved), threads);
        record.best_rate = state.best.objective;
        record.best_freq = state.best.mod_freq;
        record.best_codes = std::move(state.best.codes);
        record.history = std::move(state.history);
    } else if (resolved.method == "ga") {
        GaResult result = ga_run(scenario, make_ga_config(resolved), threads);
        record.best_rate = result.best.objective;
        record.best_freq = result.best.mod_freq;
        record.best_codes = std::move(result.best.codes);
        record.history = std::move(result.history);
    } else {
        RisOracle oracle = ris_quantized_oracle(scenario.channels, scenario.alphabet);
        ReflectionCodes codes;
        codes.elements = scenario.geometry.layout.total();
        codes.slots = 1;
        codes.idx = std::move(oracle.phase_idx);
        record.best_freq = 0.5 * (resolved.freq_min_hz + resolved.freq_max_hz);
        record.best_rate = scenario_rate(scenario, codes, record.best_freq);
        record.best_codes = std::move(codes);
    }

    record.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return record;
}

SweepResult run_sweep(const ScenarioConfig& base, const SweepSpec& spec, int threads) {
    if (spec.values.empty()) throw ConfigError("sweep needs at least one axis value");
    if (spec.methods.empty()) throw ConfigError("sweep needs at least one method");
    if (spec.trials < 1) throw ConfigError("sweep trials must be >= 1");

    SweepResult result;
    result.spec = spec;
    result.base = resolve(base);

    for (double value : spec.values) {
        for (const std::string& method : spec.methods) {
            // Cells derive from the raw config so forcing a single slot lets
            // resolve() re-derive the per-gene mutation default for that cell.
            ScenarioConfig cell_cfg =
                apply_axis(apply_method(base, method), spec.axis, value);
            SweepCell cell;
            cell.method = method;
            cell.axis_value = value;
            cell.rates.reserve(static_cast<std::size_t>(spec.trials));
            for (int t = 0; t < spec.trials; ++t) {
                cell_cfg.seed = result.base.seed + static_cast<std::uint64_t>(t);
                cell.rates.push_back(optimize_once(cell_cfg, threads).best_rate);
            }
            double sum = 0.0;
            for (double r : cell.rates) sum += r;
            cell.mean_rate = sum / static_cast<double>(cell.rates.size());
            double sq = 0.0;
            for (double r : cell.rates) sq += (r - cell.mean_rate) * (r - cell.mean_rate);
            cell.std_rate = cell.rates.size() > 1
                                ? std::sqrt(sq / static_cast<double>(cell.rates.size() - 1))
                                : 0.0;
            result.cells.push_back(std::move(cell));
        }
    }
    return result;
}

std::string sweep_csv(const SweepResult& result, const std::string& meta) {
    std::ostringstream out;
    out << "# " << meta << "\n";
    out << "axis_value,method,mean_rate,std_rate,trials\n";
    for (const SweepCell& cell : result.cells) {
        out << fmt_g(cell.axis_value) << ',' << cell.method << ','
            << fmt_g(cell.mean_rate) << ',' << fmt_g(cell.std_rate) << ','
            << cell.rates.size() << "\n";
    }
    return out.str();
}

nlohmann::json sweep_json(const SweepResult& result, std::uint64_t seed,
                          const std::string& hash) {
    nlohmann::json cells = nlohmann::json::array();
    for (const SweepCell& cell : result.cells) {
        cells.push_back({{"axis_value", cell.axis_value},
                         {"method", cell.method},
                         {"rates", cell.rates},
                         {"mean_rate", cell.mean_rate},
                         {"std_rate", cell.std_rate}});
    }
    return {{"tool", {{"name", tool_name}, {"version", tool_version}}},
            {"seed", seed},
            {"config_hash", hash},
            {"axis", result.spec.axis},
            {"values", result.spec.values},
            {"methods", result.spec.methods},
            {"trials", result.spec.trials},
            {"cells", std::move(cells)}};
}

namespace {

std::vector<const SweepCell*> cells_for(const SweepResult& result,
                                        const std::string& method) {
    std::vector<const SweepCell*> out;
    for (const SweepCell& cell : result.cells) {
        if (cell.method == method) out.push_back(&cell);
    }
    std::sort(out.begin(), out.end(), [](const SweepCell* x, const SweepCell* y) {
        return x->axis_value < y->axis_value;
    });
    return out;
}

// Power offset (in dB) at which a monotone rate-vs-power curve reaches the
// given rate, found by linear interpolation between bracketing points and
// linear extrapolation from the nearest end segment outside the range.
double power_at_rate(const std::vector<const SweepCell*>& curve, double rate) {
    const std::size_t n = curve.size();
    std::size_t seg = 0;
    while (seg + 2 < n && curve[seg + 1]->mean_rate < rate) ++seg;
    const double x0 = curve[seg]->axis_value, y0 = curve[seg]->mean_rate;
    const double x1 = curve[seg + 1]->axis_value, y1 = curve[seg + 1]->mean_rate;
    if (y1 == y0) return x0;
    return x0 + (rate - y0) * (x1 - x0) / (y1 - y0);
}

}  // namespace

std::optional<double> db_equivalent_gain(const SweepResult& result,
                                         const std::string& method,
                                         const std::string& baseline) {
    const auto a = cells_for(result, method);
    const auto b = cells_for(result, baseline);
    if (a.empty() || b.empty() || a.size() != b.size()) return std::nullopt;

    if (result.spec.axis == "P" && a.size() >= 2) {
        // How much extra transmit power the baseline needs to match the
        // method's rate, averaged over the axis points.
        double sum = 0.0;
        for (const SweepCell* cell : a) {
            sum += power_at_rate(b, cell->mean_rate) - cell->axis_value;
        }
        return sum / static_cast<double>(a.size());
    }

    double gap = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        gap += a[i]->mean_rate - b[i]->mean_rate;
    }
    gap /= static_cast<double>(a.size());
    return gap * 10.0 * std::log10(2.0);
}

}  // namespace fdris
