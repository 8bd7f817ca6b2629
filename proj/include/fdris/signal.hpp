#pragma once

#include <complex>
#include <span>
#include <vector>

// Time-coded reflection model: each surface element repeats a length-L phase
// code over a period T0 = 1/f0, one slot per code entry.  The periodic switch
// waveform is expanded in harmonics z = -Z..Z; everything downstream works on
// that truncated harmonic representation.

namespace fdris {

using cplx = std::complex<double>;

// sin(x)/x with the removable singularity at zero.
double sinc(double x);

// Quantized reflection phase set {exp(j*q*2*pi/Q), q = 1..Q} with Q = 2^bits.
// Stored 0-based: value(k) is the phase for q = k + 1.
class PhaseAlphabet {
public:
    explicit PhaseAlphabet(int bits);

    int bits() const { return bits_; }
    int size() const { return static_cast<int>(values_.size()); }
    cplx value(int idx) const;
    std::span<const cplx> values() const { return values_; }

private:
    int bits_;
    std::vector<cplx> values_;
};

// Square-wave slot timing: L slots of length tau = T0/L per period T0 = 1/f0,
// harmonics kept for |z| <= Z.
struct ModulationScheme {
    ModulationScheme(int slots, double mod_freq, int truncation);

    int slots;        // L
    double mod_freq;  // f0 [Hz]
    int truncation;   // Z

    double period() const { return 1.0 / mod_freq; }
    double slot_len() const { return period() / slots; }
};

// Per-element phase index matrix: S rows (elements) by L columns (slots),
// flattened element-major so idx[s*slots + l] is slot l of element s.
// Entries index a PhaseAlphabet.
struct ReflectionCodes {
    int elements = 0;  // S
    int slots = 0;     // L
    std::vector<int> idx;

    std::span<const int> row(int element) const;
    std::span<int> row(int element);

    static ReflectionCodes filled(int elements, int slots, int value);
};

// Fourier coefficient of the slot-l indicator pulse within one period:
//   a_{l,z} = exp(-j*2*pi*z*(l-1)/L) * (1/L) * sinc(pi*z/L) * exp(-j*pi*z/L)
// slot is 1-based (1..L) to match the (l-1) offsets above.
cplx fourier_coefficient(int slot, int order, int slots);

// L x (2Z+1) table of a_{l,z}.  Element-independent, so one table serves a
// whole surface; cache per (L, Z) via fourier_table_cache below.
class FourierTable {
public:
    FourierTable(int slots, int truncation);

    int slots() const { return slots_; }
    int truncation() const { return truncation_; }

    // slot in 1..L, order in -Z..Z
    cplx at(int slot, int order) const;

    // All 2Z+1 coefficients of one slot, ordered z = -Z..Z; slot_zero in 0..L-1.
    std::span<const cplx> slot_row(int slot_zero) const;

private:
    int slots_;
    int truncation_;
    std::vector<cplx> coeffs_;
};

// Shared immutable table per (slots, truncation); built on first use.
const FourierTable& fourier_table_cache(int slots, int truncation);

// Harmonic content of one element's code row:
//   c_z = sum_l phase(code[l]) * a_{l,z},  z = -Z..Z (returned at index z+Z).
std::vector<cplx> element_code_spectrum(std::span<const int> codes_row,
                                        const PhaseAlphabet& alphabet,
                                        const FourierTable& table);

// Equivalent reflection coefficient of one element: sum_z c_z * b_z where
// harmonic_phases holds b_z = exp(j*2*pi*z*f0*(t - delay)) at index z+Z.
cplx equivalent_theta(std::span<const int> codes_row,
                      const PhaseAlphabet& alphabet,
                      const FourierTable& table,
                      std::span<const cplx> harmonic_phases);

}  // namespace fdris
