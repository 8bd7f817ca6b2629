#pragma once

#include <optional>

#include "fdris/ceo.hpp"

// Genetic-algorithm baseline over the same design space and objective as the
// cross-entropy search.  A chromosome is the flattened code index vector plus
// the real modulation frequency.  Evaluation budget at the defaults matches
// the cross-entropy search (population x iterations).

namespace fdris {

struct GaConfig {
    int pop_size = 200;
    int generations = 500;
    int tournament_size = 4;
    double crossover_rate = 0.9;
    // Defaults resolved at run time: 1/P per discrete gene, and 5% of the
    // frequency band for the Gaussian f0 mutation.
    std::optional<double> mutation_rate_discrete;
    std::optional<double> mutation_sigma_freq;
    int elitism_count = 2;
    double freq_min = 100e3;  // [Hz]
    double freq_max = 280e3;  // [Hz]
    std::uint64_t rng_seed = 1;
};

struct GaResult {
    Candidate best;
    // Same record layout as the cross-entropy history; here elite_mean is the
    // mean fitness of the top ceil(0.1 * pop) chromosomes, mu/sigma are the
    // population mean and stddev of f0, and the entropy field is the mean
    // per-gene symbol entropy across the population.
    std::vector<HistoryRecord> history;
};

GaResult ga_run(const Scenario& scenario, const GaConfig& config, int threads = 1);

}  // namespace fdris
