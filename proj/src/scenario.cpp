#include "fdris/scenario.hpp"

#include <numbers>
#include <stdexcept>

namespace fdris {

Scenario make_scenario(const LinkGeometry& geometry, const PhaseAlphabet& alphabet,
                       int slots, int truncation, double tx_power_dbm,
                       double noise_dbm, double obs_time, bool time_averaged,
                       int period_samples) {
    if (slots < 1) throw std::domain_error("slots must be >= 1");
    if (truncation < 0) throw std::domain_error("truncation must be >= 0");
    if (time_averaged && period_samples < 64) {
        throw std::domain_error("period averaging needs at least 64 samples");
    }

    Scenario sc{geometry,
                alphabet,
                slots,
                truncation,
                build_channels(geometry, tx_power_dbm, noise_dbm),
                EvaluationContext{},
                time_averaged,
                period_samples,
                {},
                {}};
    sc.ctx.obs_time =
        obs_time >= 0.0 ? obs_time
                        : geometry.user.distance / LinkGeometry::light_speed;

    const ArrayLayout& lay = geometry.layout;
    sc.steering.resize(lay.total());
    sc.element_delay.resize(lay.total());
    for (int m = 1; m <= lay.rows; ++m) {
        for (int n = 1; n <= lay.cols; ++n) {
            const int s = lay.flat_index(m, n);
            sc.steering[s] = std::conj(sc.channels.h_br[s]) * sc.channels.h_ru[s];
            const double offset = element_offset(lay, m, n, geometry.user);
            sc.element_delay[s] =
                (geometry.user.distance - offset) / LinkGeometry::light_speed;
        }
    }
    // Touch the shared table once so hot loops never race on first build.
    fourier_table_cache(slots, truncation);
    return sc;
}

cplx scenario_gain(const Scenario& sc, const ReflectionCodes& codes,
                   double mod_freq, double obs_time) {
    const int s_total = sc.geometry.layout.total();
    if (codes.elements != s_total || codes.slots != sc.slots) {
        throw std::invalid_argument("codes shape does not match scenario");
    }
    if (!(mod_freq > 0.0)) throw std::domain_error("mod_freq must be > 0");
    const int q = sc.alphabet.size();
    for (int v : codes.idx) {
        if (v < 0 || v >= q) throw std::domain_error("phase index out of range");
    }

    const FourierTable& table = fourier_table_cache(sc.slots, sc.truncation);
    const auto phase_values = sc.alphabet.values();
    const int z_max = sc.truncation;
    const int width = 2 * z_max + 1;
    std::vector<cplx> bpow(width);

    cplx acc{0.0, 0.0};
    for (int s = 0; s < s_total; ++s) {
        const cplx base =
            std::polar(1.0, 2.0 * std::numbers::pi * mod_freq *
                                (obs_time - sc.element_delay[s]));
        bpow[z_max] = {1.0, 0.0};
        for (int z = 1; z <= z_max; ++z) {
            bpow[z_max + z] = bpow[z_max + z - 1] * base;
            bpow[z_max - z] = std::conj(bpow[z_max + z]);
        }
        cplx theta{0.0, 0.0};
        const int* row = codes.idx.data() + static_cast<std::size_t>(s) * sc.slots;
        for (int l = 0; l < sc.slots; ++l) {
            const auto coeffs = table.slot_row(l);
            cplx dot{0.0, 0.0};
            for (int i = 0; i < width; ++i) {
                dot += coeffs[i] * bpow[i];
            }
            theta += phase_values[row[l]] * dot;
        }
        acc += sc.steering[s] * theta;
    }
    return acc;
}

double scenario_power(const Scenario& sc, const ReflectionCodes& codes,
                      double mod_freq) {
    if (!sc.time_averaged) {
        return std::norm(scenario_gain(sc, codes, mod_freq, sc.ctx.obs_time));
    }
    // Trapezoid over one full period; the integrand is periodic so the two
    // half-weighted endpoints are the same sample.
    const int n = sc.period_samples;
    const double period = 1.0 / mod_freq;
    const double h = period / n;
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double w = (k == 0 || k == n) ? 0.5 : 1.0;
        acc += w * std::norm(scenario_gain(sc, codes, mod_freq,
                                           sc.ctx.obs_time + k * h));
    }
    return acc * h / period;
}

double scenario_rate(const Scenario& sc, const ReflectionCodes& codes,
                     double mod_freq) {
    return rate_from_power(scenario_power(sc, codes, mod_freq),
                           sc.channels.noise_power);
}

}  // namespace fdris
