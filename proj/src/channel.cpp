#include "fdris/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fdris {

int ArrayLayout::flat_index(int row, int col) const {
    if (row < 1 || row > rows || col < 1 || col > cols) {
        throw std::domain_error("element (row, col) out of range");
    }
    return (row - 1) * cols + (col - 1);
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) {
    if (!(watts > 0.0)) throw std::domain_error("power must be > 0 W");
    return 10.0 * std::log10(watts) + 30.0;
}

double element_offset(const ArrayLayout& layout, int row, int col,
                      const Placement& target) {
    if (row < 1 || row > layout.rows || col < 1 || col > layout.cols) {
        throw std::domain_error("element (row, col) out of range");
    }
    const double se = std::sin(target.elevation);
    return (row - 1) * layout.spacing * se * std::cos(target.azimuth) +
           (col - 1) * layout.spacing * se * std::sin(target.azimuth);
}

double path_loss_amplitude(double distance) {
    if (!(distance > 0.0)) throw std::domain_error("distance must be > 0 m");
    const double loss_db = -30.0 - 22.0 * std::log10(distance);
    return std::pow(10.0, loss_db / 20.0);
}

ChannelPair build_channels(const LinkGeometry& geometry, double tx_power_dbm,
                           double noise_dbm) {
    const ArrayLayout& lay = geometry.layout;
    if (lay.rows < 1 || lay.cols < 1) throw std::domain_error("empty array layout");
    if (!(lay.spacing > 0.0)) throw std::domain_error("element spacing must be > 0");
    if (!(geometry.carrier > 0.0)) throw std::domain_error("carrier must be > 0");

    ChannelPair pair;
    pair.tx_power = dbm_to_watts(tx_power_dbm);
    pair.noise_power = dbm_to_watts(noise_dbm);
    const double amp_br = std::sqrt(pair.tx_power) * path_loss_amplitude(geometry.bs.distance);
    const double amp_ru = path_loss_amplitude(geometry.user.distance);
    const double k = 2.0 * std::numbers::pi * geometry.carrier / LinkGeometry::light_speed;

    const int s_total = lay.total();
    pair.h_br.resize(s_total);
    pair.h_ru.resize(s_total);
    for (int m = 1; m <= lay.rows; ++m) {
        for (int n = 1; n <= lay.cols; ++n) {
            const int s = lay.flat_index(m, n);
            const double off_br = element_offset(lay, m, n, geometry.bs);
            const double off_ru = element_offset(lay, m, n, geometry.user);
            pair.h_br[s] = std::polar(amp_br, -k * (geometry.bs.distance - off_br));
            pair.h_ru[s] = std::polar(amp_ru, -k * (geometry.user.distance - off_ru));
        }
    }
    return pair;
}

std::vector<cplx> build_theta(const ReflectionCodes& codes,
                              const PhaseAlphabet& alphabet,
                              const ModulationScheme& scheme,
                              const LinkGeometry& geometry,
                              const EvaluationContext& ctx) {
    const ArrayLayout& lay = geometry.layout;
    if (codes.elements != lay.total()) {
        throw std::invalid_argument("code rows do not match element count");
    }
    if (codes.slots != scheme.slots) {
        throw std::invalid_argument("code columns do not match slot count");
    }
    const FourierTable& table = fourier_table_cache(scheme.slots, scheme.truncation);
    const int z_max = scheme.truncation;
    std::vector<cplx> phases(2 * static_cast<std::size_t>(z_max) + 1);
    std::vector<cplx> theta(lay.total());

    for (int m = 1; m <= lay.rows; ++m) {
        for (int n = 1; n <= lay.cols; ++n) {
            const int s = lay.flat_index(m, n);
            const double offset = element_offset(lay, m, n, geometry.user);
            const double delay =
                (geometry.user.distance - offset) / LinkGeometry::light_speed;
            const cplx base = std::polar(
                1.0, 2.0 * std::numbers::pi * scheme.mod_freq * (ctx.obs_time - delay));
            phases[z_max] = {1.0, 0.0};
            for (int z = 1; z <= z_max; ++z) {
                phases[z_max + z] = phases[z_max + z - 1] * base;
                phases[z_max - z] = std::conj(phases[z_max + z]);
            }
            theta[s] = equivalent_theta(codes.row(s), alphabet, table, phases);
        }
    }
    return theta;
}

cplx effective_gain(const ChannelPair& pair, std::span<const cplx> theta) {
    if (pair.h_br.size() != pair.h_ru.size() || pair.h_br.size() != theta.size()) {
        throw std::invalid_argument("channel/theta size mismatch");
    }
    cplx acc{0.0, 0.0};
    for (std::size_t s = 0; s < theta.size(); ++s) {
        acc += std::conj(pair.h_br[s]) * theta[s] * pair.h_ru[s];
    }
    return acc;
}

}  // namespace fdris
