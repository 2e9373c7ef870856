#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include <mpfr.h>

#include "fraclap/coefficients.hpp"
#include "fraclap/decay_profile.hpp"
#include "fraclap/errors.hpp"
#include "fraclap/radial_grid.hpp"

using namespace fraclap;

namespace {

GridPtr small_grid() {
    GridSpec spec;
    spec.cells = 64;
    spec.r_max = 100.0;
    spec.first_cell = 1e-2;
    return make_graded_grid(spec);
}

// Recomputes theta * omega(r) * (1+r)^{-tau} for the log-power family at 200
// bits and rounds once to double, so the library's double-precision chain is
// checked against an independently rounded value.
double envelope_mpfr(double theta, double tau, double q, double amplitude,
                     double r, double floor_val) {
    mpfr_t acc, t1, t2;
    mpfr_inits2(200, acc, t1, t2, (mpfr_ptr)nullptr);

    mpfr_set_d(t1, std::max(r, floor_val), MPFR_RNDN); // 1 + ln(max(r, floor))
    mpfr_log(t1, t1, MPFR_RNDN);
    mpfr_add_ui(t1, t1, 1, MPFR_RNDN);
    mpfr_set_d(t2, -q, MPFR_RNDN);
    mpfr_pow(acc, t1, t2, MPFR_RNDN); // (1 + ln ...)^{-q}
    mpfr_mul_d(acc, acc, amplitude, MPFR_RNDN);
    mpfr_mul_d(acc, acc, theta, MPFR_RNDN);

    mpfr_set_d(t1, 1.0 + r, MPFR_RNDN); // (1 + r)^{-tau}
    mpfr_set_d(t2, -tau, MPFR_RNDN);
    mpfr_pow(t1, t1, t2, MPFR_RNDN);
    mpfr_mul(acc, acc, t1, MPFR_RNDN);

    const double out = mpfr_get_d(acc, MPFR_RNDN);
    mpfr_clears(acc, t1, t2, (mpfr_ptr)nullptr);
    return out;
}

} // namespace

TEST_CASE("power profile convergence integral has its closed form") {
    // integral_1^inf r^{-1-eps} dr = 1/eps for the unit-amplitude family
    CHECK(dini_integral(DecayProfile::power(1.0)) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(dini_integral(DecayProfile::power(0.5)) == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(dini_integral(DecayProfile::power(1.0, 3.0)) ==
          doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("log power profile convergence integral has its closed form") {
    // substituting t = ln r turns the integral into integral_0^inf (1+t)^{-q} dt
    CHECK(dini_integral(DecayProfile::log_power(2.0)) ==
          doctest::Approx(1.0).epsilon(1e-8));
    CHECK(dini_integral(DecayProfile::log_power(1.5)) ==
          doctest::Approx(2.0).epsilon(1e-8));
    CHECK(dini_integral(DecayProfile::log_power(3.0, 2.0)) ==
          doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("divergent weights are rejected") {
    CHECK_THROWS_AS(dini_integral(DecayProfile::power(0.0)), DiniDivergentError);
    CHECK_THROWS_AS(dini_integral(DecayProfile::log_power(1.0)), DiniDivergentError);
    CHECK_THROWS_AS(dini_integral(DecayProfile::log_power(0.5)), DiniDivergentError);

    // 1/log(e + r) decays, but too slowly: the log-family fit on the last
    // decade of knots must classify the tail as divergent.
    std::vector<double> radii, values;
    double r = 1.0;
    for (int i = 0; i < 200; ++i, r *= 1.1) {
        radii.push_back(r);
        values.push_back(1.0 / std::log(std::exp(1.0) + r));
    }
    CHECK_THROWS_AS(dini_integral(DecayProfile::table(radii, values)),
                    DiniDivergentError);
}

TEST_CASE("convergence integral is monotone and linear in the profile") {
    const DecayProfile thin = DecayProfile::power(1.5);
    const DecayProfile fat = DecayProfile::power(1.0);
    for (double r : {1.0, 3.0, 10.0, 1e3, 1e6})
        REQUIRE(thin(r) <= fat(r));
    CHECK(dini_integral(thin) <= dini_integral(fat));

    const DecayProfile base = DecayProfile::log_power(2.0);
    const DecayProfile tripled = base.scaled(3.0);
    CHECK(dini_integral(tripled) ==
          doctest::Approx(3.0 * dini_integral(base)).epsilon(1e-12));
    CHECK(tripled(7.0) == doctest::Approx(3.0 * base(7.0)).epsilon(1e-15));
}

TEST_CASE("validate_profile reports instead of throwing") {
    const ProfileReport good = validate_profile(DecayProfile::power(0.5));
    CHECK(good.monotone);
    CHECK(good.positive);
    CHECK(good.dini_finite);
    CHECK(good.dini_value == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(good.offending_samples.empty());

    // 1 + sin(r) oscillates; the sampler must catch it and say where.
    std::vector<double> radii, values;
    for (int i = 0; i < 80; ++i) {
        const double r = 1.0 + 0.5 * i;
        radii.push_back(r);
        values.push_back(1.0 + std::sin(r));
    }
    const ProfileReport wavy = validate_profile(DecayProfile::table(radii, values));
    CHECK_FALSE(wavy.monotone);
    CHECK_FALSE(wavy.offending_samples.empty());

    const ProfileReport inverted = validate_profile(
        DecayProfile::table({1.0, 2.0, 4.0, 8.0}, {1.0, 0.5, 0.7, 0.25}));
    CHECK_FALSE(inverted.monotone);
    REQUIRE_FALSE(inverted.offending_samples.empty());
}

TEST_CASE("envelope composes theta, omega, and the power factor") {
    const DecayProfile omega = DecayProfile::log_power(2.0);
    CHECK(envelope(0.0, 3.0, omega, 17.0) == 0.0);

    // r below the domain floor freezes omega at its floor value
    CHECK(envelope(1.0, 0.0, omega, 0.0) == doctest::Approx(omega(1.0)).epsilon(1e-15));

    for (double r : {std::exp(1.0) - 1.0, 0.5, 2.0, 25.0, 400.0}) {
        const double lib = envelope(0.5, 3.0, omega, r);
        const double ref = envelope_mpfr(0.5, 3.0, 2.0, 1.0, r, 1.0);
        CHECK(lib == doctest::Approx(ref).epsilon(1e-14));
    }
    const double lib = envelope(2.0, 1.25, DecayProfile::log_power(3.0, 0.7), 9.0);
    const double ref = envelope_mpfr(2.0, 1.25, 3.0, 0.7, 9.0, 1.0);
    CHECK(lib == doctest::Approx(ref).epsilon(1e-14));
}

TEST_CASE("coefficient pairs sit exactly on or under the envelope") {
    const GridPtr grid = small_grid();
    const DecayProfile omega = DecayProfile::log_power(2.0);
    const double theta = 0.25, tau = 4.0, alpha = 1.0;

    SUBCASE("zero and extremal shapes") {
        const CoefficientPair pair = make_coefficient_pair(
            grid, theta, tau, alpha, omega, [](double) { return 0.0; },
            [](double) { return 1.0; });
        for (std::size_t i = 0; i < grid->nodes.size(); ++i) {
            CHECK(pair.k.values[i] == 0.0);
            CHECK(pair.K.values[i] == envelope(theta, tau, omega, grid->nodes[i]));
        }
        check_coefficient_envelopes(pair, omega);
    }

    SUBCASE("negative extremal source") {
        const CoefficientPair pair = make_coefficient_pair(
            grid, theta, tau, alpha, omega, [](double) { return 1.0; },
            [](double) { return -1.0; });
        for (std::size_t i = 0; i < grid->nodes.size(); ++i) {
            const double env = envelope(theta, tau, omega, grid->nodes[i]);
            CHECK(pair.K.values[i] == -env);
            CHECK(pair.k.values[i] == env);
        }
        check_coefficient_envelopes(pair, omega);
    }

    SUBCASE("oscillating shapes stay inside, exactly") {
        const CoefficientPair pair = make_coefficient_pair(
            grid, theta, tau, alpha, omega,
            [](double r) { return 0.5 + 0.5 * std::sin(3.0 * r); },
            [](double r) { return std::cos(r); });
        for (std::size_t i = 0; i < grid->nodes.size(); ++i) {
            const double env = envelope(theta, tau, omega, grid->nodes[i]);
            CHECK(pair.k.values[i] >= 0.0);
            CHECK(pair.k.values[i] <= env);
            CHECK(std::abs(pair.K.values[i]) <= env);
        }
        check_coefficient_envelopes(pair, omega);
    }
}

TEST_CASE("coefficient construction rejects bad shapes and bad tau") {
    const GridPtr grid = small_grid();
    const DecayProfile omega = DecayProfile::log_power(2.0);
    CHECK_THROWS_AS(make_coefficient_pair(
                        grid, 0.1, 4.0, 1.0, omega, [](double) { return 1.5; },
                        [](double) { return 0.0; }),
                    EnvelopeViolationError);
    CHECK_THROWS_AS(make_coefficient_pair(
                        grid, 0.1, 4.0, 1.0, omega, [](double) { return 0.5; },
                        [](double) { return -1.01; }),
                    EnvelopeViolationError);
    CHECK_THROWS_AS(make_coefficient_pair(
                        grid, 0.1, 0.3, 1.0, omega, [](double) { return 0.0; },
                        [](double) { return 0.0; }),
                    BadTauError);
}
