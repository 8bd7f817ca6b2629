#include <random>

#include "doctest.h"
#include "fdris/signal.hpp"
#include "oracles.hpp"

using namespace fdris;
using testing::pi;

TEST_CASE("sinc handles the removable singularity") {
    CHECK(sinc(0.0) == 1.0);
    CHECK(sinc(pi) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sinc(pi / 2) == doctest::Approx(2.0 / pi));
}

TEST_CASE("phase alphabet enumerates the quantized circle") {
    PhaseAlphabet two(2);
    CHECK(two.bits() == 2);
    CHECK(two.size() == 4);
    for (int k = 0; k < two.size(); ++k) {
        CHECK(std::abs(two.value(k)) == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK(two.value(3).real() == doctest::Approx(1.0));
    CHECK(two.value(3).imag() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(two.value(0).real() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(two.value(0).imag() == doctest::Approx(1.0));

    PhaseAlphabet one(1);
    CHECK(one.size() == 2);
    CHECK(one.value(0).real() == doctest::Approx(-1.0));
    CHECK(one.value(1).real() == doctest::Approx(1.0));

    CHECK_THROWS_AS(PhaseAlphabet(0), std::domain_error);
    CHECK_THROWS_AS(PhaseAlphabet(25), std::domain_error);
    CHECK_THROWS_AS(two.value(4), std::domain_error);
    CHECK_THROWS_AS(two.value(-1), std::domain_error);
}

TEST_CASE("modulation scheme validates its parameters") {
    ModulationScheme ok(7, 1e5, 3);
    CHECK(ok.period() == doctest::Approx(1e-5));
    CHECK(ok.slot_len() == doctest::Approx(1e-5 / 7));
    CHECK_THROWS_AS(ModulationScheme(0, 1e5, 3), std::domain_error);
    CHECK_THROWS_AS(ModulationScheme(7, 0.0, 3), std::domain_error);
    CHECK_THROWS_AS(ModulationScheme(7, 1e5, -1), std::domain_error);
}

TEST_CASE("slot coefficient closed form matches the pinned values") {
    const cplx a10 = fourier_coefficient(1, 0, 7);
    CHECK(a10.real() == 1.0 / 7);
    CHECK(a10.imag() == 0.0);

    const cplx a11 = fourier_coefficient(1, 1, 7);
    const cplx want = (sinc(pi / 7) / 7.0) * std::polar(1.0, -pi / 7);
    CHECK(a11.real() == doctest::Approx(want.real()).epsilon(1e-15));
    CHECK(a11.imag() == doctest::Approx(want.imag()).epsilon(1e-15));

    const cplx plus = fourier_coefficient(3, 2, 4);
    const cplx minus = fourier_coefficient(3, -2, 4);
    CHECK(minus.real() == doctest::Approx(std::conj(plus).real()).epsilon(1e-15));
    CHECK(minus.imag() == doctest::Approx(std::conj(plus).imag()).epsilon(1e-15));

    CHECK_THROWS_AS(fourier_coefficient(0, 1, 7), std::domain_error);
    CHECK_THROWS_AS(fourier_coefficient(8, 1, 7), std::domain_error);
    CHECK_THROWS_AS(fourier_coefficient(1, 1, 0), std::domain_error);
}

TEST_CASE("multiples of the slot count vanish exactly") {
    for (int l = 1; l <= 7; ++l) {
        for (int mult : {-14, -7, 7, 14}) {
            CHECK(fourier_coefficient(l, mult, 7) == cplx{0.0, 0.0});
        }
    }
    FourierTable single(1, 3);
    for (int z = -3; z <= 3; ++z) {
        const cplx v = single.at(1, z);
        if (z == 0) {
            CHECK(v == cplx{1.0, 0.0});
        } else {
            CHECK(v == cplx{0.0, 0.0});
        }
    }
}

TEST_CASE("table center column is 1/L for every slot") {
    FourierTable table(7, 3);
    for (int l = 1; l <= 7; ++l) {
        CHECK(table.at(l, 0) == cplx{1.0 / 7, 0.0});
    }
    CHECK_THROWS_AS(table.at(0, 0), std::domain_error);
    CHECK_THROWS_AS(table.at(1, 4), std::domain_error);
}

TEST_CASE("table entries match numerical integration") {
    for (int slots : {1, 2, 4, 7}) {
        FourierTable table(slots, 5);
        const long points = std::max(300000L, 1000000L / slots);
        for (int l = 1; l <= slots; ++l) {
            for (int z = -5; z <= 5; ++z) {
                const cplx got = table.at(l, z);
                const cplx want = testing::quad_fourier(l, z, slots, points);
                CHECK(std::abs(got - want) <= 1e-8);
            }
        }
    }
}

TEST_CASE("hermitian symmetry holds across the table") {
    FourierTable table(7, 6);
    for (int l = 1; l <= 7; ++l) {
        for (int z = 1; z <= 6; ++z) {
            const cplx a = table.at(l, z);
            const cplx b = table.at(l, -z);
            CHECK(b.real() == doctest::Approx(a.real()).epsilon(1e-15));
            CHECK(b.imag() == doctest::Approx(-a.imag()).epsilon(1e-15));
        }
    }
}

TEST_CASE("shared table cache hands back one instance") {
    const FourierTable& a = fourier_table_cache(7, 3);
    const FourierTable& b = fourier_table_cache(7, 3);
    CHECK(&a == &b);
    CHECK(a.slots() == 7);
    CHECK(a.truncation() == 3);
}

TEST_CASE("code row spectra match a direct double sum") {
    PhaseAlphabet alphabet(3);
    FourierTable table(5, 2);
    std::mt19937_64 rng(7);
    std::vector<int> row(5);
    for (int trial = 0; trial < 20; ++trial) {
        for (int& v : row) v = static_cast<int>(rng() % alphabet.size());
        const auto spectrum = element_code_spectrum(row, alphabet, table);
        REQUIRE(spectrum.size() == 5);
        for (int z = -2; z <= 2; ++z) {
            cplx want{0.0, 0.0};
            for (int l = 1; l <= 5; ++l) {
                want += alphabet.value(row[l - 1]) * testing::direct_fourier(l, z, 5);
            }
            CHECK(std::abs(spectrum[z + 2] - want) <= 1e-14);
        }
    }
}

TEST_CASE("constant codes collapse to a single harmonic") {
    PhaseAlphabet alphabet(2);
    FourierTable table(7, 3);
    const std::vector<int> row(7, 1);
    const auto spectrum = element_code_spectrum(row, alphabet, table);
    CHECK(std::abs(spectrum[3] - alphabet.value(1)) <= 1e-15);
    for (int i = 0; i < 7; ++i) {
        if (i != 3) CHECK(std::abs(spectrum[i]) <= 1e-15);
    }

    FourierTable single(1, 0);
    const std::vector<int> one{2};
    const auto s1 = element_code_spectrum(one, alphabet, single);
    REQUIRE(s1.size() == 1);
    CHECK(std::abs(s1[0] - alphabet.value(2)) <= 1e-15);

    const std::vector<int> wrong(6, 0);
    CHECK_THROWS_AS(element_code_spectrum(wrong, alphabet, table),
                    std::invalid_argument);
}

TEST_CASE("partial spectral power stays below one and converges") {
    // The slot waveform has jump discontinuities, so the spectral tail decays
    // like (slots/pi^2)/Z: about 0.2% of the energy still sits beyond
    // Z = 50*slots for a typical random row, and the captured share first
    // clears 0.999 for every row only around Z ~ 200*slots.
    const int slots = 7;
    const int mid = 50 * slots;
    const int big = 1500;
    PhaseAlphabet alphabet(6);
    FourierTable table(slots, big);
    std::mt19937_64 rng(11);
    std::vector<int> row(slots);
    for (int trial = 0; trial < 100; ++trial) {
        for (int& v : row) v = static_cast<int>(rng() % alphabet.size());
        const auto spectrum = element_code_spectrum(row, alphabet, table);
        double partial = std::norm(spectrum[big]);
        CHECK(partial <= 1.0 + 1e-12);
        for (int z = 1; z <= big; ++z) {
            partial += std::norm(spectrum[big + z]) + std::norm(spectrum[big - z]);
            CHECK(partial <= 1.0 + 1e-12);
            if (z == mid) CHECK(partial >= 0.995);
        }
        CHECK(partial >= 0.999);
    }
}

TEST_CASE("equivalent reflection matches the triple sum") {
    PhaseAlphabet alphabet(2);
    FourierTable table(7, 3);
    std::mt19937_64 rng(3);
    std::vector<int> row(7);
    for (int trial = 0; trial < 20; ++trial) {
        for (int& v : row) v = static_cast<int>(rng() % alphabet.size());
        const double angle =
            2.0 * pi * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
        std::vector<cplx> b(7);
        for (int z = -3; z <= 3; ++z) b[z + 3] = std::polar(1.0, angle * z);

        const cplx got = equivalent_theta(row, alphabet, table, b);
        cplx want{0.0, 0.0};
        for (int z = -3; z <= 3; ++z) {
            for (int l = 1; l <= 7; ++l) {
                want += alphabet.value(row[l - 1]) * testing::direct_fourier(l, z, 7) *
                        std::polar(1.0, angle * z);
            }
        }
        CHECK(std::abs(got - want) <= 1e-13);
    }
}

TEST_CASE("equivalent reflection degenerate forms") {
    PhaseAlphabet alphabet(2);

    FourierTable single(1, 0);
    const std::vector<int> one{1};
    const std::vector<cplx> b1{cplx{1.0, 0.0}};
    CHECK(std::abs(equivalent_theta(one, alphabet, single, b1) - alphabet.value(1)) <=
          1e-15);

    FourierTable table(7, 3);
    std::vector<int> row{0, 1, 2, 3, 0, 1, 2};
    const std::vector<cplx> ones(7, cplx{1.0, 0.0});
    const auto spectrum = element_code_spectrum(row, alphabet, table);
    cplx sum{0.0, 0.0};
    for (const cplx& c : spectrum) sum += c;
    CHECK(std::abs(equivalent_theta(row, alphabet, table, ones) - sum) <= 1e-15);

    const std::vector<cplx> short_b(5, cplx{1.0, 0.0});
    CHECK_THROWS_AS(equivalent_theta(row, alphabet, table, short_b),
                    std::invalid_argument);
}

TEST_CASE("reflection code rows are element-major views") {
    ReflectionCodes codes = ReflectionCodes::filled(3, 4, 2);
    CHECK(codes.idx.size() == 12);
    codes.row(1)[2] = 0;
    CHECK(codes.idx[1 * 4 + 2] == 0);
    CHECK(codes.row(2).size() == 4);
    CHECK_THROWS_AS(codes.row(3), std::domain_error);
    CHECK_THROWS_AS(ReflectionCodes::filled(0, 4, 1), std::domain_error);
}
