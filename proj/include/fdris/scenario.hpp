#pragma once

#include <cmath>

#include "fdris/channel.hpp"

// A fully assembled link ready for repeated rate evaluations.  Everything a
// candidate (codes, f0) does not change is precomputed here: the channel
// steering products and the per-element propagation delays.

namespace fdris {

struct Scenario {
    LinkGeometry geometry;
    PhaseAlphabet alphabet;
    int slots = 1;       // L
    int truncation = 0;  // Z
    ChannelPair channels;
    EvaluationContext ctx;
    bool time_averaged = false;
    int period_samples = 64;

    std::vector<cplx> steering;         // conj(h_br_s) * h_ru_s
    std::vector<double> element_delay;  // (d_ru - offset_s) / c [s]
};

// obs_time < 0 means "use the user-path delay d_ru / c".
Scenario make_scenario(const LinkGeometry& geometry, const PhaseAlphabet& alphabet,
                       int slots, int truncation, double tx_power_dbm,
                       double noise_dbm, double obs_time = -1.0,
                       bool time_averaged = false, int period_samples = 64);

// h_br^H * Theta * h_ru at the given observation time.
cplx scenario_gain(const Scenario& sc, const ReflectionCodes& codes,
                   double mod_freq, double obs_time);

// |gain|^2, either at sc.ctx.obs_time or trapezoid-averaged over one period.
double scenario_power(const Scenario& sc, const ReflectionCodes& codes,
                      double mod_freq);

inline double rate_from_power(double signal_power, double noise_power) {
    return std::log2(1.0 + signal_power / noise_power);
}

double scenario_rate(const Scenario& sc, const ReflectionCodes& codes,
                     double mod_freq);

}  // namespace fdris
