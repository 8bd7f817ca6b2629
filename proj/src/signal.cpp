#include "fdris/signal.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace fdris {

double sinc(double x) {
    if (x == 0.0) return 1.0;
    return std::sin(x) / x;
}

PhaseAlphabet::PhaseAlphabet(int bits) : bits_(bits) {
    if (bits < 1 || bits > 24) {
        throw std::domain_error("alphabet bits must be in 1..24");
    }
    const int q = 1 << bits;
    values_.resize(q);
    for (int k = 0; k < q; ++k) {
        values_[k] = std::polar(1.0, (k + 1) * 2.0 * std::numbers::pi / q);
    }
}

cplx PhaseAlphabet::value(int idx) const {
    if (idx < 0 || idx >= size()) {
        throw std::domain_error("phase index out of range");
    }
    return values_[idx];
}

ModulationScheme::ModulationScheme(int slots_in, double mod_freq_in, int truncation_in)
    : slots(slots_in), mod_freq(mod_freq_in), truncation(truncation_in) {
    if (slots < 1) throw std::domain_error("slots must be >= 1");
    if (!(mod_freq > 0.0)) throw std::domain_error("mod_freq must be > 0");
    if (truncation < 0) throw std::domain_error("truncation must be >= 0");
}

std::span<const int> ReflectionCodes::row(int element) const {
    if (element < 0 || element >= elements) {
        throw std::domain_error("element index out of range");
    }
    return {idx.data() + static_cast<std::size_t>(element) * slots,
            static_cast<std::size_t>(slots)};
}

std::span<int> ReflectionCodes::row(int element) {
    if (element < 0 || element >= elements) {
        throw std::domain_error("element index out of range");
    }
    return {idx.data() + static_cast<std::size_t>(element) * slots,
            static_cast<std::size_t>(slots)};
}

ReflectionCodes ReflectionCodes::filled(int elements, int slots, int value) {
    if (elements < 1 || slots < 1) {
        throw std::domain_error("codes shape must be positive");
    }
    ReflectionCodes c;
    c.elements = elements;
    c.slots = slots;
    c.idx.assign(static_cast<std::size_t>(elements) * slots, value);
    return c;
}

cplx fourier_coefficient(int slot, int order, int slots) {
    if (slots < 1) throw std::domain_error("slots must be >= 1");
    if (slot < 1 || slot > slots) throw std::domain_error("slot out of range");
    if (order == 0) return {1.0 / slots, 0.0};
    // sin(pi*z) vanishes whenever z is a multiple of L; keep those exact.
    if (order % slots == 0) return {0.0, 0.0};
    const double x = std::numbers::pi * order / slots;
    const double mag = sinc(x) / slots;  // may be negative, fold into cartesian form
    const double phase =
        -2.0 * std::numbers::pi * order * (slot - 1) / slots - x;
    return {mag * std::cos(phase), mag * std::sin(phase)};
}

FourierTable::FourierTable(int slots, int truncation)
    : slots_(slots), truncation_(truncation) {
    if (slots < 1) throw std::domain_error("slots must be >= 1");
    if (truncation < 0) throw std::domain_error("truncation must be >= 0");
    const int width = 2 * truncation + 1;
    coeffs_.resize(static_cast<std::size_t>(slots) * width);
    for (int l = 1; l <= slots; ++l) {
        for (int z = -truncation; z <= truncation; ++z) {
            coeffs_[static_cast<std::size_t>(l - 1) * width + (z + truncation)] =
                fourier_coefficient(l, z, slots);
        }
    }
}

cplx FourierTable::at(int slot, int order) const {
    if (slot < 1 || slot > slots_) throw std::domain_error("slot out of range");
    if (order < -truncation_ || order > truncation_) {
        throw std::domain_error("harmonic order out of range");
    }
    const int width = 2 * truncation_ + 1;
    return coeffs_[static_cast<std::size_t>(slot - 1) * width + (order + truncation_)];
}

std::span<const cplx> FourierTable::slot_row(int slot_zero) const {
    if (slot_zero < 0 || slot_zero >= slots_) {
        throw std::domain_error("slot out of range");
    }
    const std::size_t width = 2 * static_cast<std::size_t>(truncation_) + 1;
    return {coeffs_.data() + slot_zero * width, width};
}

const FourierTable& fourier_table_cache(int slots, int truncation) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<FourierTable>> cache;
    std::scoped_lock lock(mu);
    auto& slot = cache[{slots, truncation}];
    if (!slot) slot = std::make_unique<FourierTable>(slots, truncation);
    return *slot;
}

std::vector<cplx> element_code_spectrum(std::span<const int> codes_row,
                                        const PhaseAlphabet& alphabet,
                                        const FourierTable& table) {
    if (static_cast<int>(codes_row.size()) != table.slots()) {
        throw std::invalid_argument("code row length does not match slot count");
    }
    const int z_max = table.truncation();
    const int width = 2 * z_max + 1;
    std::vector<cplx> spectrum(width, cplx{0.0, 0.0});
    for (int l = 0; l < table.slots(); ++l) {
        const cplx phase = alphabet.value(codes_row[l]);
        const auto row = table.slot_row(l);
        for (int i = 0; i < width; ++i) {
            spectrum[i] += phase * row[i];
        }
    }
    return spectrum;
}

cplx equivalent_theta(std::span<const int> codes_row,
                      const PhaseAlphabet& alphabet,
                      const FourierTable& table,
                      std::span<const cplx> harmonic_phases) {
    const std::size_t width = 2 * static_cast<std::size_t>(table.truncation()) + 1;
    if (harmonic_phases.size() != width) {
        throw std::invalid_argument("harmonic phase vector has wrong length");
    }
    const auto spectrum = element_code_spectrum(codes_row, alphabet, table);
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < width; ++i) {
        acc += spectrum[i] * harmonic_phases[i];
    }
    return acc;
}

}  // namespace fdris
