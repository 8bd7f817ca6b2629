#include "fdris/ga.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fdris/parallel.hpp"
#include "fdris/rng.hpp"

namespace fdris {

namespace {

void check_config(const GaConfig& config) {
    if (config.pop_size < 2) throw std::invalid_argument("pop_size must be >= 2");
    if (config.generations < 1) throw std::invalid_argument("generations must be >= 1");
    if (config.tournament_size < 1) {
        throw std::invalid_argument("tournament_size must be >= 1");
    }
    if (config.crossover_rate < 0.0 || config.crossover_rate > 1.0) {
        throw std::invalid_argument("crossover_rate must be in [0, 1]");
    }
    if (config.elitism_count < 0 || config.elitism_count > config.pop_size) {
        throw std::invalid_argument("elitism_count must be in [0, pop_size]");
    }
    if (!(config.freq_min > 0.0) || !(config.freq_max >= config.freq_min)) {
        throw std::invalid_argument("frequency band must satisfy 0 < freq_min <= freq_max");
    }
    if (config.mutation_rate_discrete &&
        (*config.mutation_rate_discrete < 0.0 || *config.mutation_rate_discrete > 1.0)) {
        throw std::invalid_argument("mutation_rate_discrete must be in [0, 1]");
    }
    if (config.mutation_sigma_freq && *config.mutation_sigma_freq < 0.0) {
        throw std::invalid_argument("mutation_sigma_freq must be >= 0");
    }
}

std::vector<int> rank_desc(const std::vector<Candidate>& pop) {
    std::vector<int> order(pop.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return pop[a].objective > pop[b].objective;
    });
    return order;
}

int tournament_pick(const std::vector<Candidate>& pop, int rounds,
                    std::mt19937_64& rng) {
    int winner = uniform_index(rng, static_cast<int>(pop.size()));
    for (int r = 1; r < rounds; ++r) {
        const int challenger = uniform_index(rng, static_cast<int>(pop.size()));
        if (pop[challenger].objective > pop[winner].objective ||
            (pop[challenger].objective == pop[winner].objective &&
             challenger < winner)) {
            winner = challenger;
        }
    }
    return winner;
}

}  // namespace

GaResult ga_run(const Scenario& scenario, const GaConfig& config, int threads) {
    check_config(config);
    const int elements = scenario.geometry.layout.total();
    const int slots = scenario.slots;
    const int genes = elements * slots;
    const int symbols = scenario.alphabet.size();
    const double mut_rate = config.mutation_rate_discrete.value_or(1.0 / genes);
    const double mut_sigma = config.mutation_sigma_freq.value_or(
        0.05 * (config.freq_max - config.freq_min));

    std::mt19937_64 rng(config.rng_seed);
    std::vector<Candidate> pop(config.pop_size);
    for (auto& cand : pop) {
        cand.codes.elements = elements;
        cand.codes.slots = slots;
        cand.codes.idx.resize(genes);
        for (int p = 0; p < genes; ++p) {
            cand.codes.idx[p] = uniform_index(rng, symbols);
        }
        cand.mod_freq = config.freq_min +
                        uniform_double(rng) * (config.freq_max - config.freq_min);
    }
    parallel_for(pop.size(), threads,
                 [&](std::size_t i) { evaluate(pop[i], scenario); });

    GaResult result;
    {
        const auto order = rank_desc(pop);
        result.best = pop[order.front()];
    }

    const int elite_window = static_cast<int>(std::ceil(0.1 * config.pop_size));
    std::vector<int> gene_counts(symbols);

    for (int gen = 1; gen <= config.generations; ++gen) {
        const auto order = rank_desc(pop);
        std::vector<Candidate> next;
        next.reserve(config.pop_size);
        for (int e = 0; e < config.elitism_count; ++e) {
            next.push_back(pop[order[e]]);
        }
        while (static_cast<int>(next.size()) < config.pop_size) {
            const int pa = tournament_pick(pop, config.tournament_size, rng);
            const int pb = tournament_pick(pop, config.tournament_size, rng);
            Candidate child = pop[pa];
            if (uniform_double(rng) < config.crossover_rate) {
                for (int p = 0; p < genes; ++p) {
                    if (uniform_double(rng) < 0.5) {
                        child.codes.idx[p] = pop[pb].codes.idx[p];
                    }
                }
                if (uniform_double(rng) < 0.5) child.mod_freq = pop[pb].mod_freq;
            }
            for (int p = 0; p < genes; ++p) {
                if (uniform_double(rng) < mut_rate) {
                    child.codes.idx[p] = uniform_index(rng, symbols);
                }
            }
            child.mod_freq = std::clamp(child.mod_freq + mut_sigma * normal_double(rng),
                                        config.freq_min, config.freq_max);
            child.objective = -std::numeric_limits<double>::infinity();
            next.push_back(std::move(child));
        }
        pop = std::move(next);
        parallel_for(pop.size(), threads, [&](std::size_t i) {
            if (std::isinf(pop[i].objective)) evaluate(pop[i], scenario);
        });

        const auto new_order = rank_desc(pop);
        if (pop[new_order.front()].objective > result.best.objective) {
            result.best = pop[new_order.front()];
        }

        double elite_mean = 0.0;
        for (int e = 0; e < elite_window; ++e) {
            elite_mean += pop[new_order[e]].objective;
        }
        elite_mean /= elite_window;
        double mu = 0.0;
        for (const auto& c : pop) mu += c.mod_freq;
        mu /= config.pop_size;
        double var = 0.0;
        for (const auto& c : pop) {
            const double d = c.mod_freq - mu;
            var += d * d;
        }
        const double sigma = std::sqrt(var / config.pop_size);
        double entropy = 0.0;
        for (int p = 0; p < genes; ++p) {
            std::fill(gene_counts.begin(), gene_counts.end(), 0);
            for (const auto& c : pop) ++gene_counts[c.codes.idx[p]];
            double h = 0.0;
            for (int q = 0; q < symbols; ++q) {
                if (gene_counts[q] > 0) {
                    const double f = static_cast<double>(gene_counts[q]) / config.pop_size;
                    h -= f * std::log2(f);
                }
            }
            entropy += h;
        }
        entropy /= genes;
        result.history.push_back(
            {gen, result.best.objective, elite_mean, mu, sigma, entropy});
    }
    return result;
}

}  // namespace fdris
