#pragma once

#include <cstdint>
#include <limits>
#include <random>

#include "fdris/scenario.hpp"

// Cross-entropy search over the joint design space: one categorical sampling
// distribution per code entry (P = S*L rows over Q phases) plus a Gaussian
// over the modulation frequency.  Each iteration samples a population, keeps
// the top fraction, refits both distributions to the elites in closed form,
// and blends the refit into the previous distributions.

namespace fdris {

struct CategoricalTilting {
    int rows = 0;     // P = S*L
    int symbols = 0;  // Q
    std::vector<double> probs;  // rows x symbols, row-major

    double at(int row, int symbol) const { return probs[static_cast<std::size_t>(row) * symbols + symbol]; }
    double& at(int row, int symbol) { return probs[static_cast<std::size_t>(row) * symbols + symbol]; }
};

struct GaussianTilting {
    double mean = 0.0;    // [Hz]
    double stddev = 0.0;  // [Hz]
};

struct Candidate {
    ReflectionCodes codes;
    double mod_freq = 0.0;
    double objective = -std::numeric_limits<double>::infinity();
};

struct CeoConfig {
    int pop_size = 200;        // K
    double elite_frac = 0.1;   // elite count = ceil(elite_frac * K)
    double smoothing = 0.65;   // blend weight on the freshly fitted values
    double freq_min = 100e3;   // [Hz]
    double freq_max = 280e3;   // [Hz]
    int max_iters = 500;
    int stall_iters = 5;
    double stall_tol = 1e-4;   // [bits]
    std::uint64_t rng_seed = 1;

    int elite_count() const;
};

struct HistoryRecord {
    int iteration = 0;
    double best_rate = 0.0;    // best-so-far objective
    double elite_mean = 0.0;
    double mu = 0.0;           // frequency distribution after the update
    double sigma = 0.0;
    double mean_row_entropy_bits = 0.0;
};

struct CeoState {
    CategoricalTilting cat;
    GaussianTilting gauss;
    int elements = 0;
    int slots = 0;
    int iter = 0;
    Candidate best;
    std::vector<HistoryRecord> history;
};

// Uniform categorical rows; frequency Gaussian centered on the band with
// stddev spanning half of it.
CeoState ceo_init(int elements, int slots, int alphabet_size, const CeoConfig& config);

// K candidates; codes row-by-row from the categorical rows, f0 from the
// Gaussian by rejection (at most 100 attempts) then clamped into the band.
std::vector<Candidate> sample_candidates(const CeoState& state,
                                         const CeoConfig& config,
                                         std::mt19937_64& rng);

// Fills candidate.objective with the scenario rate and returns it.
double evaluate(Candidate& candidate, const Scenario& scenario);

// Top ceil(elite_frac * K) by objective, ties broken toward lower index.
std::vector<Candidate> select_elite(const std::vector<Candidate>& candidates,
                                    const CeoConfig& config);

// Closed-form refit to the elites (empirical symbol frequencies; sample mean
// and population stddev of f0), blended by the smoothing weight, then guarded:
// stddev floored at 1e-6 of the band, categorical cells floored at 1e-6 with
// row renormalization when a floor actually fires.
void update_tilting(CeoState& state, std::span<const Candidate> elites,
                    const CeoConfig& config);

// Full loop: sample, evaluate, select, update, until best-so-far improvement
// stays below stall_tol for stall_iters consecutive iterations or max_iters.
CeoState ceo_run(const Scenario& scenario, const CeoConfig& config, int threads = 1);

}  // namespace fdris
