#include "fdris/pattern.hpp"

#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>

#include "fdris/format.hpp"
#include "fdris/parallel.hpp"

namespace fdris {

namespace {

constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

std::vector<double> linspace(double lo, double hi, int points) {
    std::vector<double> out(points);
    if (points == 1) {
        out[0] = lo;
        return out;
    }
    const double step = (hi - lo) / (points - 1);
    for (int i = 0; i < points; ++i) out[i] = lo + i * step;
    return out;
}

double wrap_2pi(double x) {
    const double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(x, two_pi);
    if (r < 0.0) r += two_pi;
    return r;
}

}  // namespace

PatternGrid beam_pattern(const ReflectionCodes& codes, const PhaseAlphabet& alphabet,
                         const ModulationScheme& scheme, const LinkGeometry& geometry,
                         const GridSpec& grid, bool include_path_loss,
                         const EvaluationContext& ctx, double tx_power_dbm,
                         int threads) {
    const ArrayLayout& lay = geometry.layout;
    if (codes.elements != lay.total()) {
        throw std::invalid_argument("code rows do not match element count");
    }
    if (codes.slots != scheme.slots) {
        throw std::invalid_argument("code columns do not match slot count");
    }
    if (grid.dist_points < 1 || grid.az_points < 1) {
        throw std::domain_error("grid needs at least one point per axis");
    }
    if (!(grid.dist_min > 0.0) || grid.dist_max < grid.dist_min) {
        throw std::domain_error("distance axis must satisfy 0 < min <= max");
    }
    if (grid.az_max_deg < grid.az_min_deg) {
        throw std::domain_error("azimuth axis must satisfy min <= max");
    }

    PatternGrid out;
    out.distances = linspace(grid.dist_min, grid.dist_max, grid.dist_points);
    out.azimuths = linspace(grid.az_min_deg, grid.az_max_deg, grid.az_points);
    out.elevation_deg = grid.elevation_deg;
    out.values.assign(
        static_cast<std::size_t>(grid.dist_points) * grid.az_points, 0.0);

    const int s_total = lay.total();
    const int z_max = scheme.truncation;
    const int width = 2 * z_max + 1;
    const FourierTable& table = fourier_table_cache(scheme.slots, z_max);

    // Everything that does not depend on the grid cell.
    std::vector<cplx> spectra(static_cast<std::size_t>(s_total) * width);
    for (int s = 0; s < s_total; ++s) {
        const auto spec = element_code_spectrum(codes.row(s), alphabet, table);
        std::copy(spec.begin(), spec.end(),
                  spectra.begin() + static_cast<std::size_t>(s) * width);
    }
    const double amp_br =
        std::sqrt(dbm_to_watts(tx_power_dbm)) *
        (include_path_loss ? path_loss_amplitude(geometry.bs.distance) : 1.0);
    const double k_c =
        2.0 * std::numbers::pi * geometry.carrier / LinkGeometry::light_speed;
    std::vector<cplx> w_bs(s_total);
    std::vector<double> offsets(static_cast<std::size_t>(s_total) * grid.az_points);
    for (int m = 1; m <= lay.rows; ++m) {
        for (int n = 1; n <= lay.cols; ++n) {
            const int s = lay.flat_index(m, n);
            const double off_br = element_offset(lay, m, n, geometry.bs);
            w_bs[s] = std::polar(amp_br, k_c * (geometry.bs.distance - off_br));
            for (int j = 0; j < grid.az_points; ++j) {
                const Placement cell{1.0, deg2rad(grid.elevation_deg),
                                     deg2rad(out.azimuths[j])};
                offsets[static_cast<std::size_t>(s) * grid.az_points + j] =
                    element_offset(lay, m, n, cell);
            }
        }
    }

    parallel_for(static_cast<std::size_t>(grid.dist_points), threads, [&](std::size_t i) {
        const double dist = out.distances[i];
        const double amp_ru = include_path_loss ? path_loss_amplitude(dist) : 1.0;
        std::vector<cplx> bpow(width);
        for (int j = 0; j < grid.az_points; ++j) {
            cplx acc{0.0, 0.0};
            for (int s = 0; s < s_total; ++s) {
                const double offset =
                    offsets[static_cast<std::size_t>(s) * grid.az_points + j];
                const double path = dist - offset;
                const cplx h_ru = std::polar(amp_ru, -k_c * path);
                const cplx base = std::polar(
                    1.0, 2.0 * std::numbers::pi * scheme.mod_freq *
                             (ctx.obs_time - path / LinkGeometry::light_speed));
                bpow[z_max] = {1.0, 0.0};
                for (int z = 1; z <= z_max; ++z) {
                    bpow[z_max + z] = bpow[z_max + z - 1] * base;
                    bpow[z_max - z] = std::conj(bpow[z_max + z]);
                }
                cplx theta{0.0, 0.0};
                const cplx* spec = spectra.data() + static_cast<std::size_t>(s) * width;
                for (int zi = 0; zi < width; ++zi) theta += spec[zi] * bpow[zi];
                acc += w_bs[s] * theta * h_ru;
            }
            out.values[i * grid.az_points + j] = std::norm(acc);
        }
    });
    return out;
}

std::string pattern_csv(const PatternGrid& grid, const std::string& meta) {
    std::string out;
    out.reserve(grid.values.size() * 24 + 64);
    if (!meta.empty()) {
        out += "# ";
        out += meta;
        out += '\n';
    }
    out += "distance,azimuth,power\n";
    for (std::size_t i = 0; i < grid.distances.size(); ++i) {
        for (std::size_t j = 0; j < grid.azimuths.size(); ++j) {
            out += fmt_g(grid.distances[i]);
            out += ',';
            out += fmt_g(grid.azimuths[j]);
            out += ',';
            out += fmt_g(grid.values[i * grid.azimuths.size() + j]);
            out += '\n';
        }
    }
    return out;
}

double rate_from_gain(cplx gain, double noise_power) {
    if (!(noise_power > 0.0)) throw std::domain_error("noise power must be > 0");
    return rate_from_power(std::norm(gain), noise_power);
}

// The best static assignment must be greedy toward some direction psi: each
// element picks the alphabet phase nearest psi - arg(w_s).  As psi sweeps the
// circle the greedy choice changes only at S*Q equally spaced switch points
// per element, so enumerating arcs between consecutive switch points visits
// every achievable greedy assignment.  The arc maximizing |sum| is optimal.
RisOracle ris_quantized_oracle(const ChannelPair& pair, const PhaseAlphabet& alphabet) {
    const int s_total = static_cast<int>(pair.h_br.size());
    if (s_total == 0 || pair.h_ru.size() != pair.h_br.size()) {
        throw std::invalid_argument("channel pair is empty or mismatched");
    }
    const int q_total = alphabet.size();
    const auto phases = alphabet.values();
    const double step = 2.0 * std::numbers::pi / q_total;

    std::vector<cplx> w(s_total);
    std::vector<double> w_arg(s_total);
    for (int s = 0; s < s_total; ++s) {
        w[s] = std::conj(pair.h_br[s]) * pair.h_ru[s];
        w_arg[s] = std::arg(w[s]);
    }
    auto initial_index = [&](int s) {
        const long k = std::lround(-w_arg[s] / step) - 1;
        return static_cast<int>(((k % q_total) + q_total) % q_total);
    };
    auto alphabet_angle = [&](int k) { return (k + 1) * step; };

    struct Event {
        double t;
        int s;
    };
    auto later = [](const Event& x, const Event& y) {
        return x.t > y.t || (x.t == y.t && x.s > y.s);
    };

    // One pass records where |sum| peaks; the replay pass rebuilds that arc's
    // assignment and recomputes the sum exactly, discarding sweep drift.
    auto sweep = [&](long stop_ordinal, std::vector<int>& k_out) {
        std::vector<int> k(s_total);
        std::vector<int> remaining(s_total, q_total);
        cplx v{0.0, 0.0};
        std::priority_queue<Event, std::vector<Event>, decltype(later)> heap(later);
        for (int s = 0; s < s_total; ++s) {
            k[s] = initial_index(s);
            v += w[s] * phases[k[s]];
            heap.push({wrap_2pi(w_arg[s] + alphabet_angle(k[s]) + 0.5 * step), s});
        }
        long best_ordinal = -1;
        double best_abs = std::abs(v);
        long ordinal = 0;
        while (!heap.empty()) {
            if (stop_ordinal >= 0 && ordinal > stop_ordinal) break;
            const Event ev = heap.top();
            heap.pop();
            const int s = ev.s;
            const int next = (k[s] + 1) % q_total;
            v += w[s] * (phases[next] - phases[k[s]]);
            k[s] = next;
            const double a = std::abs(v);
            if (a > best_abs) {
                best_abs = a;
                best_ordinal = ordinal;
            }
            if (--remaining[s] > 0) heap.push({ev.t + step, s});
            ++ordinal;
        }
        k_out = std::move(k);
        return best_ordinal;
    };

    std::vector<int> scratch;
    const long best_ordinal = sweep(-1, scratch);
    RisOracle oracle;
    sweep(best_ordinal, oracle.phase_idx);
    oracle.gain = {0.0, 0.0};
    for (int s = 0; s < s_total; ++s) {
        oracle.gain += w[s] * phases[oracle.phase_idx[s]];
    }
    return oracle;
}

}  // namespace fdris
