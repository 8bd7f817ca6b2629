#include <random>

#include "doctest.h"
#include "fdris/scenario.hpp"
#include "oracles.hpp"

using namespace fdris;
using testing::pi;

namespace {

LinkGeometry geometry_of(const testing::OracleScenario& sc) {
    LinkGeometry g;
    g.layout = {sc.rows, sc.cols, sc.spacing};
    g.bs = {sc.bs_dist, sc.bs_el, sc.bs_az};
    g.user = {sc.user_dist, sc.user_el, sc.user_az};
    g.carrier = sc.carrier;
    return g;
}

double urand(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

TEST_CASE("scenario gain equals the unsimplified sum on random instances") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        testing::OracleScenario osc;
        osc.rows = 1 + static_cast<int>(rng() % 3);
        osc.cols = 1 + static_cast<int>(rng() % 3);
        osc.slots = 1 + static_cast<int>(rng() % 7);
        osc.truncation = static_cast<int>(rng() % 4);
        osc.bs_dist = 10.0 + 40.0 * urand(rng);
        osc.user_dist = 50.0 + 200.0 * urand(rng);
        osc.bs_el = 0.2 + 2.7 * urand(rng);
        osc.bs_az = -pi + 2.0 * pi * urand(rng);
        osc.user_el = 0.2 + 2.7 * urand(rng);
        osc.user_az = -pi + 2.0 * pi * urand(rng);
        const int bits = 1 + static_cast<int>(rng() % 3);
        const double mod_freq = 1e5 + 1.8e5 * urand(rng);
        const double obs_time = urand(rng) * 1e-5;

        PhaseAlphabet alphabet(bits);
        const int s_total = osc.rows * osc.cols;
        ReflectionCodes codes = ReflectionCodes::filled(s_total, osc.slots, 0);
        std::vector<std::vector<cplx>> phase_rows(s_total,
                                                  std::vector<cplx>(osc.slots));
        for (int s = 0; s < s_total; ++s) {
            for (int l = 0; l < osc.slots; ++l) {
                const int pick = static_cast<int>(rng() % alphabet.size());
                codes.idx[static_cast<std::size_t>(s) * osc.slots + l] = pick;
                phase_rows[s][l] = alphabet.value(pick);
            }
        }

        const Scenario sc =
            make_scenario(geometry_of(osc), alphabet, osc.slots, osc.truncation,
                          osc.tx_dbm, osc.noise_dbm, obs_time);
        const cplx got = scenario_gain(sc, codes, mod_freq, obs_time);
        const cplx want = testing::oracle_gain(osc, phase_rows, mod_freq, obs_time);
        CHECK(std::abs(got - want) <= 1e-10 * std::max(1e-12, std::abs(want)));
    }
}

TEST_CASE("single-slot pipeline equals the static closed form") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 50; ++trial) {
        testing::OracleScenario osc;
        osc.rows = 1 + static_cast<int>(rng() % 4);
        osc.cols = 1 + static_cast<int>(rng() % 4);
        osc.slots = 1;
        osc.truncation = static_cast<int>(rng() % 4);
        osc.user_dist = 50.0 + 200.0 * urand(rng);
        osc.user_az = -pi / 2 + pi * urand(rng);
        const int bits = 1 + static_cast<int>(rng() % 3);
        PhaseAlphabet alphabet(bits);
        const int s_total = osc.rows * osc.cols;

        ReflectionCodes codes = ReflectionCodes::filled(s_total, 1, 0);
        for (int s = 0; s < s_total; ++s) {
            codes.idx[s] = static_cast<int>(rng() % alphabet.size());
        }

        const LinkGeometry g = geometry_of(osc);
        const Scenario sc = make_scenario(g, alphabet, 1, osc.truncation, osc.tx_dbm,
                                          osc.noise_dbm);
        const double mod_freq = 1e5 + 1.8e5 * urand(rng);
        const double got = scenario_rate(sc, codes, mod_freq);

        const ChannelPair pair = build_channels(g, osc.tx_dbm, osc.noise_dbm);
        cplx gain{0.0, 0.0};
        for (int s = 0; s < s_total; ++s) {
            gain += std::conj(pair.h_br[s]) * alphabet.value(codes.idx[s]) *
                    pair.h_ru[s];
        }
        const double want = std::log2(1.0 + std::norm(gain) / pair.noise_power);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("constant codes reproduce the static surface") {
    std::mt19937_64 rng(41);
    PhaseAlphabet alphabet(2);
    for (int trial = 0; trial < 50; ++trial) {
        testing::OracleScenario osc;
        osc.rows = 2;
        osc.cols = 1 + static_cast<int>(rng() % 4);
        osc.user_dist = 60.0 + 180.0 * urand(rng);
        osc.user_az = -pi / 2 + pi * urand(rng);
        const int s_total = osc.rows * osc.cols;
        const LinkGeometry g = geometry_of(osc);

        ReflectionCodes coded = ReflectionCodes::filled(s_total, 7, 0);
        ReflectionCodes flat = ReflectionCodes::filled(s_total, 1, 0);
        for (int s = 0; s < s_total; ++s) {
            const int pick = static_cast<int>(rng() % alphabet.size());
            for (int l = 0; l < 7; ++l) {
                coded.idx[static_cast<std::size_t>(s) * 7 + l] = pick;
            }
            flat.idx[s] = pick;
        }

        const double mod_freq = 1e5 + 1.8e5 * urand(rng);
        const Scenario modulated =
            make_scenario(g, alphabet, 7, 3, osc.tx_dbm, osc.noise_dbm);
        const Scenario stat =
            make_scenario(g, alphabet, 1, 0, osc.tx_dbm, osc.noise_dbm);
        const double got = scenario_rate(modulated, coded, mod_freq);
        const double want = scenario_rate(stat, flat, mod_freq);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("observation time defaults to the user propagation delay") {
    testing::OracleScenario osc;
    const Scenario sc = make_scenario(geometry_of(osc), PhaseAlphabet(2), 7, 3,
                                      osc.tx_dbm, osc.noise_dbm);
    CHECK(sc.ctx.obs_time ==
          doctest::Approx(150.0 / LinkGeometry::light_speed).epsilon(1e-15));

    const Scenario pinned = make_scenario(geometry_of(osc), PhaseAlphabet(2), 7, 3,
                                          osc.tx_dbm, osc.noise_dbm, 0.0);
    CHECK(pinned.ctx.obs_time == 0.0);
}

TEST_CASE("period averaging agrees with dense integration") {
    testing::OracleScenario osc;
    osc.rows = 2;
    osc.cols = 2;
    PhaseAlphabet alphabet(2);
    std::mt19937_64 rng(55);
    ReflectionCodes codes = ReflectionCodes::filled(4, 7, 0);
    for (int& v : codes.idx) v = static_cast<int>(rng() % alphabet.size());
    const double mod_freq = 1.7e5;

    const Scenario averaged = make_scenario(geometry_of(osc), alphabet, 7, 3,
                                            osc.tx_dbm, osc.noise_dbm, -1.0, true, 64);
    const double got = scenario_power(averaged, codes, mod_freq);

    // The power is a trigonometric polynomial of degree 2Z in t, so a dense
    // midpoint average over exactly one period is an independent reference.
    const Scenario instant =
        make_scenario(geometry_of(osc), alphabet, 7, 3, osc.tx_dbm, osc.noise_dbm);
    const int dense = 10000;
    const double period = 1.0 / mod_freq;
    double want = 0.0;
    for (int k = 0; k < dense; ++k) {
        const double t = instant.ctx.obs_time + (k + 0.5) * period / dense;
        want += std::norm(scenario_gain(instant, codes, mod_freq, t));
    }
    want /= dense;
    CHECK(got == doctest::Approx(want).epsilon(1e-10));

    CHECK_THROWS_AS(make_scenario(geometry_of(osc), alphabet, 7, 3, osc.tx_dbm,
                                  osc.noise_dbm, -1.0, true, 32),
                    std::domain_error);
}

TEST_CASE("constant surfaces average to their instantaneous power") {
    testing::OracleScenario osc;
    osc.rows = 2;
    osc.cols = 2;
    PhaseAlphabet alphabet(2);
    ReflectionCodes codes = ReflectionCodes::filled(4, 1, 1);
    const Scenario averaged = make_scenario(geometry_of(osc), alphabet, 1, 0,
                                            osc.tx_dbm, osc.noise_dbm, -1.0, true, 64);
    const Scenario instant =
        make_scenario(geometry_of(osc), alphabet, 1, 0, osc.tx_dbm, osc.noise_dbm);
    CHECK(scenario_power(averaged, codes, 1.5e5) ==
          doctest::Approx(scenario_power(instant, codes, 1.5e5)).epsilon(1e-12));
}

TEST_CASE("rate formula spot values") {
    CHECK(rate_from_power(0.0, 1e-14) == 0.0);
    CHECK(rate_from_power(1e-14, 1e-14) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rate_from_power(3e-14, 1e-14) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rate_from_power(1023e-14, 1e-14) == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("scenario rejects malformed candidates") {
    testing::OracleScenario osc;
    osc.rows = 2;
    osc.cols = 2;
    const Scenario sc = make_scenario(geometry_of(osc), PhaseAlphabet(2), 7, 3,
                                      osc.tx_dbm, osc.noise_dbm);
    ReflectionCodes wrong_rows = ReflectionCodes::filled(3, 7, 0);
    CHECK_THROWS_AS(scenario_gain(sc, wrong_rows, 1e5, 0.0), std::invalid_argument);
    ReflectionCodes wrong_slots = ReflectionCodes::filled(4, 6, 0);
    CHECK_THROWS_AS(scenario_gain(sc, wrong_slots, 1e5, 0.0), std::invalid_argument);
    ReflectionCodes bad_symbol = ReflectionCodes::filled(4, 7, 9);
    CHECK_THROWS_AS(scenario_gain(sc, bad_symbol, 1e5, 0.0), std::domain_error);
    ReflectionCodes fine = ReflectionCodes::filled(4, 7, 0);
    CHECK_THROWS_AS(scenario_gain(sc, fine, 0.0, 0.0), std::domain_error);
}

TEST_CASE("transmit power scales scenario power linearly") {
    testing::OracleScenario low;
    low.tx_dbm = 20.0;
    testing::OracleScenario high;
    high.tx_dbm = 30.0;
    low.rows = high.rows = 3;
    low.cols = high.cols = 3;
    PhaseAlphabet alphabet(2);
    std::mt19937_64 rng(71);
    ReflectionCodes codes = ReflectionCodes::filled(9, 7, 0);
    for (int& v : codes.idx) v = static_cast<int>(rng() % alphabet.size());
    const Scenario a =
        make_scenario(geometry_of(low), alphabet, 7, 3, low.tx_dbm, low.noise_dbm);
    const Scenario b =
        make_scenario(geometry_of(high), alphabet, 7, 3, high.tx_dbm, high.noise_dbm);
    const double pa = scenario_power(a, codes, 1.9e5);
    const double pb = scenario_power(b, codes, 1.9e5);
    CHECK(pb == doctest::Approx(10.0 * pa).epsilon(1e-12));
}
