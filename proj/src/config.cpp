#include "fdris/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace fdris {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError("config field '" + path + "': " + msg);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        bool known = false;
        for (const char* a : allowed) {
            if (key == a) {
                known = true;
                break;
            }
        }
        if (!known) fail(path.empty() ? key : path + "." + key, "unknown field");
    }
}

double get_num(const json& obj, const std::string& path, const char* key,
               double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(path + key, "expected a number");
    return v.get<double>();
}

std::optional<double> get_opt_num(const json& obj, const std::string& path,
                                  const char* key, std::optional<double> fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (v.is_null()) return std::nullopt;
    if (!v.is_number()) fail(path + key, "expected a number or null");
    return v.get<double>();
}

int get_int(const json& obj, const std::string& path, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(path + key, "expected an integer");
    return v.get<int>();
}

std::string get_str(const json& obj, const std::string& path, const char* key,
                    const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) fail(path + key, "expected a string");
    return v.get<std::string>();
}

PlacementConfig parse_placement(const json& obj, const std::string& path,
                                const PlacementConfig& fallback) {
    if (!obj.is_object()) fail(path, "expected an object");
    check_keys(obj, path, {"distance_m", "elevation_deg", "azimuth_deg"});
    PlacementConfig p = fallback;
    p.distance_m = get_num(obj, path + ".", "distance_m", p.distance_m);
    p.elevation_deg = get_num(obj, path + ".", "elevation_deg", p.elevation_deg);
    p.azimuth_deg = get_num(obj, path + ".", "azimuth_deg", p.azimuth_deg);
    return p;
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::ostringstream msg;
        msg << "config parse error at line " << line << ", column " << col << ": "
            << e.what();
        throw ConfigError(msg.str());
    }
    if (!root.is_object()) throw ConfigError("config root must be an object");
    check_keys(root, "",
               {"geometry", "modulation", "power", "optimizer", "evaluation", "seed"});

    ScenarioConfig cfg;
    if (root.contains("geometry")) {
        const json& g = root.at("geometry");
        if (!g.is_object()) fail("geometry", "expected an object");
        check_keys(g, "geometry",
                   {"rows", "cols", "spacing_m", "carrier_hz", "bs", "user"});
        cfg.rows = get_int(g, "geometry.", "rows", cfg.rows);
        cfg.cols = get_int(g, "geometry.", "cols", cfg.cols);
        cfg.spacing_m = get_opt_num(g, "geometry.", "spacing_m", cfg.spacing_m);
        cfg.carrier_hz = get_num(g, "geometry.", "carrier_hz", cfg.carrier_hz);
        if (g.contains("bs")) cfg.bs = parse_placement(g.at("bs"), "geometry.bs", cfg.bs);
        if (g.contains("user")) {
            cfg.user = parse_placement(g.at("user"), "geometry.user", cfg.user);
        }
    }
    if (root.contains("modulation")) {
        const json& m = root.at("modulation");
        if (!m.is_object()) fail("modulation", "expected an object");
        check_keys(m, "modulation",
                   {"slots", "truncation", "bits", "freq_min_hz", "freq_max_hz"});
        cfg.slots = get_int(m, "modulation.", "slots", cfg.slots);
        cfg.truncation = get_int(m, "modulation.", "truncation", cfg.truncation);
        cfg.bits = get_int(m, "modulation.", "bits", cfg.bits);
        cfg.freq_min_hz = get_num(m, "modulation.", "freq_min_hz", cfg.freq_min_hz);
        cfg.freq_max_hz = get_num(m, "modulation.", "freq_max_hz", cfg.freq_max_hz);
    }
    if (root.contains("power")) {
        const json& p = root.at("power");
        if (!p.is_object()) fail("power", "expected an object");
        check_keys(p, "power", {"tx_dbm", "noise_dbm"});
        cfg.tx_dbm = get_num(p, "power.", "tx_dbm", cfg.tx_dbm);
        cfg.noise_dbm = get_num(p, "power.", "noise_dbm", cfg.noise_dbm);
    }
    if (root.contains("optimizer")) {
        const json& o = root.at("optimizer");
        if (!o.is_object()) fail("optimizer", "expected an object");
        check_keys(o, "optimizer", {"method", "ceo", "ga"});
        cfg.method = get_str(o, "optimizer.", "method", cfg.method);
        if (o.contains("ceo")) {
            const json& c = o.at("ceo");
            if (!c.is_object()) fail("optimizer.ceo", "expected an object");
            check_keys(c, "optimizer.ceo",
                       {"pop_size", "elite_frac", "smoothing", "max_iters",
                        "stall_iters", "stall_tol"});
            cfg.ceo.pop_size = get_int(c, "optimizer.ceo.", "pop_size", cfg.ceo.pop_size);
            cfg.ceo.elite_frac =
                get_num(c, "optimizer.ceo.", "elite_frac", cfg.ceo.elite_frac);
            cfg.ceo.smoothing =
                get_num(c, "optimizer.ceo.", "smoothing", cfg.ceo.smoothing);
            cfg.ceo.max_iters =
                get_int(c, "optimizer.ceo.", "max_iters", cfg.ceo.max_iters);
            cfg.ceo.stall_iters =
                get_int(c, "optimizer.ceo.", "stall_iters", cfg.ceo.stall_iters);
            cfg.ceo.stall_tol =
                get_num(c, "optimizer.ceo.", "stall_tol", cfg.ceo.stall_tol);
        }
        if (o.contains("ga")) {
            const json& g = o.at("ga");
            if (!g.is_object()) fail("optimizer.ga", "expected an object");
            check_keys(g, "optimizer.ga",
                       {"pop_size", "generations", "tournament_size", "crossover_rate",
                        "mutation_rate_discrete", "mutation_sigma_freq_hz",
                        "elitism_count"});
            cfg.ga.pop_size = get_int(g, "optimizer.ga.", "pop_size", cfg.ga.pop_size);
            cfg.ga.generations =
                get_int(g, "optimizer.ga.", "generations", cfg.ga.generations);
            cfg.ga.tournament_size =
                get_int(g, "optimizer.ga.", "tournament_size", cfg.ga.tournament_size);
            cfg.ga.crossover_rate =
                get_num(g, "optimizer.ga.", "crossover_rate", cfg.ga.crossover_rate);
            cfg.ga.mutation_rate_discrete = get_opt_num(
                g, "optimizer.ga.", "mutation_rate_discrete", cfg.ga.mutation_rate_discrete);
            cfg.ga.mutation_sigma_freq_hz = get_opt_num(
                g, "optimizer.ga.", "mutation_sigma_freq_hz", cfg.ga.mutation_sigma_freq_hz);
            cfg.ga.elitism_count =
                get_int(g, "optimizer.ga.", "elitism_count", cfg.ga.elitism_count);
        }
    }
    if (root.contains("evaluation")) {
        const json& e = root.at("evaluation");
        if (!e.is_object()) fail("evaluation", "expected an object");
        check_keys(e, "evaluation", {"mode", "obs_time_s", "period_samples"});
        cfg.eval.mode = get_str(e, "evaluation.", "mode", cfg.eval.mode);
        cfg.eval.obs_time_s =
            get_opt_num(e, "evaluation.", "obs_time_s", cfg.eval.obs_time_s);
        cfg.eval.period_samples =
            get_int(e, "evaluation.", "period_samples", cfg.eval.period_samples);
    }
    if (root.contains("seed")) {
        const json& s = root.at("seed");
        if (!s.is_number_integer()) fail("seed", "expected a non-negative integer");
        if (!s.is_number_unsigned() && s.get<std::int64_t>() < 0) {
            fail("seed", "expected a non-negative integer");
        }
        cfg.seed = s.get<std::uint64_t>();
    }
    return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

ScenarioConfig resolve(const ScenarioConfig& raw) {
    ScenarioConfig cfg = raw;
    if (cfg.rows < 1) fail("geometry.rows", "must be >= 1");
    if (cfg.cols < 1) fail("geometry.cols", "must be >= 1");
    if (!(cfg.carrier_hz > 0.0)) fail("geometry.carrier_hz", "must be > 0");
    if (!cfg.spacing_m) {
        cfg.spacing_m = 0.5 * LinkGeometry::light_speed / cfg.carrier_hz;
    }
    if (!(*cfg.spacing_m > 0.0)) fail("geometry.spacing_m", "must be > 0");
    if (!(cfg.bs.distance_m > 0.0)) fail("geometry.bs.distance_m", "must be > 0");
    if (!(cfg.user.distance_m > 0.0)) fail("geometry.user.distance_m", "must be > 0");
    if (cfg.slots < 1) fail("modulation.slots", "must be >= 1");
    if (cfg.truncation < 0) fail("modulation.truncation", "must be >= 0");
    if (cfg.bits < 1 || cfg.bits > 20) fail("modulation.bits", "must be in 1..20");
    if (!(cfg.freq_min_hz > 0.0)) fail("modulation.freq_min_hz", "must be > 0");
    if (cfg.freq_max_hz < cfg.freq_min_hz) {
        fail("modulation.freq_min_hz", "exceeds modulation.freq_max_hz");
    }
    if (cfg.method != "ceo" && cfg.method != "ga" && cfg.method != "oracle") {
        fail("optimizer.method", "must be one of: ceo, ga, oracle");
    }
    if (cfg.method == "oracle" && cfg.slots != 1) {
        fail("optimizer.method", "oracle requires modulation.slots = 1");
    }
    if (cfg.ceo.pop_size < 1) fail("optimizer.ceo.pop_size", "must be >= 1");
    if (!(cfg.ceo.elite_frac > 0.0) || cfg.ceo.elite_frac > 1.0) {
        fail("optimizer.ceo.elite_frac", "must be in (0, 1]");
    }
    if (cfg.ceo.smoothing < 0.0 || cfg.ceo.smoothing > 1.0) {
        fail("optimizer.ceo.smoothing", "must be in [0, 1]");
    }
    if (cfg.ceo.max_iters < 1) fail("optimizer.ceo.max_iters", "must be >= 1");
    if (cfg.ceo.stall_iters < 1) fail("optimizer.ceo.stall_iters", "must be >= 1");
    if (cfg.ceo.stall_tol < 0.0) fail("optimizer.ceo.stall_tol", "must be >= 0");
    if (cfg.ga.pop_size < 2) fail("optimizer.ga.pop_size", "must be >= 2");
    if (cfg.ga.generations < 1) fail("optimizer.ga.generations", "must be >= 1");
    if (cfg.ga.tournament_size < 1) {
        fail("optimizer.ga.tournament_size", "must be >= 1");
    }
    if (cfg.ga.crossover_rate < 0.0 || cfg.ga.crossover_rate > 1.0) {
        fail("optimizer.ga.crossover_rate", "must be in [0, 1]");
    }
    if (cfg.ga.elitism_count < 0 || cfg.ga.elitism_count > cfg.ga.pop_size) {
        fail("optimizer.ga.elitism_count", "must be in [0, pop_size]");
    }
    if (!cfg.ga.mutation_rate_discrete) {
        cfg.ga.mutation_rate_discrete =
            1.0 / (static_cast<double>(cfg.rows) * cfg.cols * cfg.slots);
    }
    if (*cfg.ga.mutation_rate_discrete < 0.0 || *cfg.ga.mutation_rate_discrete > 1.0) {
        fail("optimizer.ga.mutation_rate_discrete", "must be in [0, 1]");
    }
    if (!cfg.ga.mutation_sigma_freq_hz) {
        cfg.ga.mutation_sigma_freq_hz = 0.05 * (cfg.freq_max_hz - cfg.freq_min_hz);
    }
    if (*cfg.ga.mutation_sigma_freq_hz < 0.0) {
        fail("optimizer.ga.mutation_sigma_freq_hz", "must be >= 0");
    }
    if (cfg.eval.mode != "instant" && cfg.eval.mode != "time-average") {
        fail("evaluation.mode", "must be 'instant' or 'time-average'");
    }
    if (cfg.eval.mode == "time-average" && cfg.eval.period_samples < 64) {
        fail("evaluation.period_samples", "must be >= 64 for time-average mode");
    }
    if (!cfg.eval.obs_time_s) {
        cfg.eval.obs_time_s = cfg.user.distance_m / LinkGeometry::light_speed;
    }
    if (*cfg.eval.obs_time_s < 0.0) fail("evaluation.obs_time_s", "must be >= 0");
    return cfg;
}

namespace {

json placement_json(const PlacementConfig& p) {
    return {{"distance_m", p.distance_m},
            {"elevation_deg", p.elevation_deg},
            {"azimuth_deg", p.azimuth_deg}};
}

}  // namespace

json config_json(const ScenarioConfig& cfg) {
    if (!cfg.spacing_m || !cfg.eval.obs_time_s || !cfg.ga.mutation_rate_discrete ||
        !cfg.ga.mutation_sigma_freq_hz) {
        throw std::logic_error("config_json needs a resolved config");
    }
    json j;
    j["geometry"] = {{"rows", cfg.rows},
                     {"cols", cfg.cols},
                     {"spacing_m", *cfg.spacing_m},
                     {"carrier_hz", cfg.carrier_hz},
                     {"bs", placement_json(cfg.bs)},
                     {"user", placement_json(cfg.user)}};
    j["modulation"] = {{"slots", cfg.slots},
                       {"truncation", cfg.truncation},
                       {"bits", cfg.bits},
                       {"freq_min_hz", cfg.freq_min_hz},
                       {"freq_max_hz", cfg.freq_max_hz}};
    j["power"] = {{"tx_dbm", cfg.tx_dbm}, {"noise_dbm", cfg.noise_dbm}};
    j["optimizer"] = {
        {"method", cfg.method},
        {"ceo",
         {{"pop_size", cfg.ceo.pop_size},
          {"elite_frac", cfg.ceo.elite_frac},
          {"smoothing", cfg.ceo.smoothing},
          {"max_iters", cfg.ceo.max_iters},
          {"stall_iters", cfg.ceo.stall_iters},
          {"stall_tol", cfg.ceo.stall_tol}}},
        {"ga",
         {{"pop_size", cfg.ga.pop_size},
          {"generations", cfg.ga.generations},
          {"tournament_size", cfg.ga.tournament_size},
          {"crossover_rate", cfg.ga.crossover_rate},
          {"mutation_rate_discrete", *cfg.ga.mutation_rate_discrete},
          {"mutation_sigma_freq_hz", *cfg.ga.mutation_sigma_freq_hz},
          {"elitism_count", cfg.ga.elitism_count}}}};
    j["evaluation"] = {{"mode", cfg.eval.mode},
                       {"obs_time_s", *cfg.eval.obs_time_s},
                       {"period_samples", cfg.eval.period_samples}};
    j["seed"] = cfg.seed;
    return j;
}

std::string config_hash(const ScenarioConfig& cfg) {
    const std::string dump = config_json(cfg).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

LinkGeometry make_geometry(const ScenarioConfig& cfg) {
    const double d2r = std::numbers::pi / 180.0;
    LinkGeometry g;
    g.layout = {cfg.rows, cfg.cols, cfg.spacing_m.value()};
    g.bs = {cfg.bs.distance_m, cfg.bs.elevation_deg * d2r, cfg.bs.azimuth_deg * d2r};
    g.user = {cfg.user.distance_m, cfg.user.elevation_deg * d2r,
              cfg.user.azimuth_deg * d2r};
    g.carrier = cfg.carrier_hz;
    return g;
}

Scenario build_scenario(const ScenarioConfig& cfg) {
    const ScenarioConfig r = resolve(cfg);
    return make_scenario(make_geometry(r), PhaseAlphabet(r.bits), r.slots,
                         r.truncation, r.tx_dbm, r.noise_dbm, *r.eval.obs_time_s,
                         r.eval.mode == "time-average", r.eval.period_samples);
}

CeoConfig make_ceo_config(const ScenarioConfig& cfg) {
    CeoConfig c;
    c.pop_size = cfg.ceo.pop_size;
    c.elite_frac = cfg.ceo.elite_frac;
    c.smoothing = cfg.ceo.smoothing;
    c.freq_min = cfg.freq_min_hz;
    c.freq_max = cfg.freq_max_hz;
    c.max_iters = cfg.ceo.max_iters;
    c.stall_iters = cfg.ceo.stall_iters;
    c.stall_tol = cfg.ceo.stall_tol;
    c.rng_seed = cfg.seed;
    return c;
}

GaConfig make_ga_config(const ScenarioConfig& cfg) {
    GaConfig g;
    g.pop_size = cfg.ga.pop_size;
    g.generations = cfg.ga.generations;
    g.tournament_size = cfg.ga.tournament_size;
    g.crossover_rate = cfg.ga.crossover_rate;
    g.mutation_rate_discrete = cfg.ga.mutation_rate_discrete;
    g.mutation_sigma_freq = cfg.ga.mutation_sigma_freq_hz;
    g.elitism_count = cfg.ga.elitism_count;
    g.freq_min = cfg.freq_min_hz;
    g.freq_max = cfg.freq_max_hz;
    g.rng_seed = cfg.seed;
    return g;
}

json record_json(const RunRecord& record) {
    json j;
    j["tool"] = {{"name", tool_name}, {"version", tool_version}};
    j["method"] = record.method;
    j["seed"] = record.seed;
    j["config_hash"] = record.hash;
    j["config"] = config_json(record.config);
    j["best"] = {{"rate_bits", record.best_rate},
                 {"mod_freq_hz", record.best_freq},
                 {"codes",
                  {{"elements", record.best_codes.elements},
                   {"slots", record.best_codes.slots},
                   {"idx", record.best_codes.idx}}}};
    json hist = json::array();
    for (const HistoryRecord& h : record.history) {
        hist.push_back({{"iteration", h.iteration},
                        {"best_rate", h.best_rate},
                        {"elite_mean", h.elite_mean},
                        {"mu", h.mu},
                        {"sigma", h.sigma},
                        {"entropy_bits", h.mean_row_entropy_bits}});
    }
    j["history"] = std::move(hist);
    return j;
}

RunRecord record_from_json(const json& j) {
    auto need = [&](const json& obj, const char* key) -> const json& {
        if (!obj.contains(key)) {
            throw ConfigError(std::string("run record is missing field '") + key + "'");
        }
        return obj.at(key);
    };
    RunRecord r;
    r.method = need(j, "method").get<std::string>();
    r.seed = need(j, "seed").get<std::uint64_t>();
    r.hash = need(j, "config_hash").get<std::string>();
    r.config = resolve(parse_config_text(need(j, "config").dump()));
    const json& best = need(j, "best");
    r.best_rate = need(best, "rate_bits").get<double>();
    r.best_freq = need(best, "mod_freq_hz").get<double>();
    const json& codes = need(best, "codes");
    r.best_codes.elements = need(codes, "elements").get<int>();
    r.best_codes.slots = need(codes, "slots").get<int>();
    r.best_codes.idx = need(codes, "idx").get<std::vector<int>>();
    if (static_cast<int>(r.best_codes.idx.size()) !=
        r.best_codes.elements * r.best_codes.slots) {
        throw ConfigError("run record codes have inconsistent shape");
    }
    if (j.contains("history")) {
        for (const json& h : j.at("history")) {
            r.history.push_back({need(h, "iteration").get<int>(),
                                 need(h, "best_rate").get<double>(),
                                 need(h, "elite_mean").get<double>(),
                                 need(h, "mu").get<double>(),
                                 need(h, "sigma").get<double>(),
                                 need(h, "entropy_bits").get<double>()});
        }
    }
    return r;
}

json pattern_json(const PatternGrid& grid, std::uint64_t seed,
                  const std::string& hash) {
    return {{"tool", {{"name", tool_name}, {"version", tool_version}}},
            {"seed", seed},
            {"config_hash", hash},
            {"elevation_deg", grid.elevation_deg},
            {"distances_m", grid.distances},
            {"azimuths_deg", grid.azimuths},
            {"power", grid.values}};
}

}  // namespace fdris
