#include "fdris/ceo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fdris/parallel.hpp"
#include "fdris/rng.hpp"

namespace fdris {

namespace {

void check_config(const CeoConfig& config) {
    if (config.pop_size < 1) throw std::invalid_argument("pop_size must be >= 1");
    if (!(config.elite_frac > 0.0) || config.elite_frac > 1.0) {
        throw std::invalid_argument("elite_frac must be in (0, 1]");
    }
    if (config.smoothing < 0.0 || config.smoothing > 1.0) {
        throw std::invalid_argument("smoothing must be in [0, 1]");
    }
    if (!(config.freq_min > 0.0) || !(config.freq_max >= config.freq_min)) {
        throw std::invalid_argument("frequency band must satisfy 0 < freq_min <= freq_max");
    }
    if (config.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    if (config.stall_iters < 1) throw std::invalid_argument("stall_iters must be >= 1");
}

int sample_symbol(std::span<const double> row, std::mt19937_64& rng) {
    const double u = uniform_double(rng);
    double acc = 0.0;
    for (std::size_t q = 0; q + 1 < row.size(); ++q) {
        acc += row[q];
        if (u < acc) return static_cast<int>(q);
    }
    return static_cast<int>(row.size()) - 1;
}

double sample_freq(const GaussianTilting& gauss, const CeoConfig& config,
                   std::mt19937_64& rng) {
    double x = gauss.mean;
    for (int attempt = 0; attempt < 100; ++attempt) {
        x = gauss.mean + gauss.stddev * normal_double(rng);
        if (x >= config.freq_min && x <= config.freq_max) return x;
    }
    return std::clamp(x, config.freq_min, config.freq_max);
}

double mean_row_entropy_bits(const CategoricalTilting& cat) {
    double total = 0.0;
    for (int p = 0; p < cat.rows; ++p) {
        double h = 0.0;
        for (int q = 0; q < cat.symbols; ++q) {
            const double v = cat.at(p, q);
            if (v > 0.0) h -= v * std::log2(v);
        }
        total += h;
    }
    return cat.rows > 0 ? total / cat.rows : 0.0;
}

}  // namespace

int CeoConfig::elite_count() const {
    return static_cast<int>(std::ceil(elite_frac * pop_size));
}

CeoState ceo_init(int elements, int slots, int alphabet_size,
                  const CeoConfig& config) {
    check_config(config);
    if (elements < 1 || slots < 1) throw std::invalid_argument("empty code shape");
    if (alphabet_size < 1) throw std::invalid_argument("empty alphabet");

    CeoState state;
    state.elements = elements;
    state.slots = slots;
    state.cat.rows = elements * slots;
    state.cat.symbols = alphabet_size;
    state.cat.probs.assign(
        static_cast<std::size_t>(state.cat.rows) * alphabet_size,
        1.0 / alphabet_size);
    state.gauss.mean = 0.5 * (config.freq_min + config.freq_max);
    state.gauss.stddev = 0.5 * (config.freq_max - config.freq_min);
    return state;
}

std::vector<Candidate> sample_candidates(const CeoState& state,
                                         const CeoConfig& config,
                                         std::mt19937_64& rng) {
    check_config(config);
    std::vector<Candidate> out(config.pop_size);
    const int width = state.cat.symbols;
    for (auto& cand : out) {
        cand.codes.elements = state.elements;
        cand.codes.slots = state.slots;
        cand.codes.idx.resize(state.cat.rows);
        for (int p = 0; p < state.cat.rows; ++p) {
            const std::span<const double> row{
                state.cat.probs.data() + static_cast<std::size_t>(p) * width,
                static_cast<std::size_t>(width)};
            cand.codes.idx[p] = sample_symbol(row, rng);
        }
        cand.mod_freq = sample_freq(state.gauss, config, rng);
    }
    return out;
}

double evaluate(Candidate& candidate, const Scenario& scenario) {
    candidate.objective = scenario_rate(scenario, candidate.codes, candidate.mod_freq);
    return candidate.objective;
}

std::vector<Candidate> select_elite(const std::vector<Candidate>& candidates,
                                    const CeoConfig& config) {
    if (candidates.empty()) throw std::invalid_argument("no candidates to select from");
    std::vector<int> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return candidates[a].objective > candidates[b].objective;
    });
    const int keep = std::min<int>(config.elite_count(),
                                   static_cast<int>(candidates.size()));
    std::vector<Candidate> elites;
    elites.reserve(keep);
    for (int i = 0; i < keep; ++i) elites.push_back(candidates[order[i]]);
    return elites;
}

void update_tilting(CeoState& state, std::span<const Candidate> elites,
                    const CeoConfig& config) {
    if (elites.empty()) throw std::invalid_argument("elite set is empty");
    const double xi = config.smoothing;
    const int rows = state.cat.rows;
    const int symbols = state.cat.symbols;
    const double inv = 1.0 / static_cast<double>(elites.size());

    std::vector<int> counts(symbols);
    for (int p = 0; p < rows; ++p) {
        std::fill(counts.begin(), counts.end(), 0);
        for (const Candidate& e : elites) {
            ++counts[e.codes.idx[p]];
        }
        bool floored = false;
        double sum = 0.0;
        for (int q = 0; q < symbols; ++q) {
            double v = xi * (counts[q] * inv) + (1.0 - xi) * state.cat.at(p, q);
            if (v < 1e-6) {
                v = 1e-6;
                floored = true;
            }
            state.cat.at(p, q) = v;
            sum += v;
        }
        if (floored) {
            for (int q = 0; q < symbols; ++q) state.cat.at(p, q) /= sum;
        }
    }

    double mu = 0.0;
    for (const Candidate& e : elites) mu += e.mod_freq;
    mu *= inv;
    double var = 0.0;
    for (const Candidate& e : elites) {
        const double d = e.mod_freq - mu;
        var += d * d;
    }
    const double sigma = std::sqrt(var * inv);

    state.gauss.mean = xi * mu + (1.0 - xi) * state.gauss.mean;
    state.gauss.stddev = xi * sigma + (1.0 - xi) * state.gauss.stddev;
    const double floor = 1e-6 * (config.freq_max - config.freq_min);
    state.gauss.stddev = std::max(state.gauss.stddev, floor);
}

CeoState ceo_run(const Scenario& scenario, const CeoConfig& config, int threads) {
    check_config(config);
    CeoState state = ceo_init(scenario.geometry.layout.total(), scenario.slots,
                              scenario.alphabet.size(), config);
    std::mt19937_64 rng(config.rng_seed);
    int stall = 0;
    for (int iter = 1; iter <= config.max_iters; ++iter) {
        auto candidates = sample_candidates(state, config, rng);
        parallel_for(candidates.size(), threads,
                     [&](std::size_t i) { evaluate(candidates[i], scenario); });
        auto elites = select_elite(candidates, config);

        const double prev_best = state.best.objective;
        if (elites.front().objective > state.best.objective) {
            state.best = elites.front();
        }
        state.iter = iter;
        update_tilting(state, elites, config);

        double elite_mean = 0.0;
        for (const Candidate& e : elites) elite_mean += e.objective;
        elite_mean /= static_cast<double>(elites.size());
        state.history.push_back({iter, state.best.objective, elite_mean,
                                 state.gauss.mean, state.gauss.stddev,
                                 mean_row_entropy_bits(state.cat)});

        const double improvement = state.best.objective - prev_best;
        stall = improvement < config.stall_tol ? stall + 1 : 0;
        if (stall >= config.stall_iters) break;
    }
    return state;
}

}  // namespace fdris
