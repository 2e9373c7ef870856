#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fraclap/envelopes.hpp"
#include "fraclap/errors.hpp"
#include "fraclap/riesz_potential.hpp"
#include "oracles.hpp"

using namespace fraclap;

namespace {

GridPtr grid_for(std::size_t cells, double r_max, double first_cell,
                 double tail_hint = 4.0) {
    GridSpec spec;
    spec.cells = cells;
    spec.r_max = r_max;
    spec.first_cell = first_cell;
    spec.tail_exponent_hint = tail_hint;
    return make_graded_grid(spec);
}

} // namespace

TEST_CASE("zero source gives the zero potential") {
    const GridPtr grid = grid_for(32, 40.0, 1e-2);
    const RadialFunction zero = sample(grid, [](double) { return 0.0; }, 0.0, 6.0);
    const RadialFunction w = riesz_potential(zero, grid, 3, 1.0);
    for (double v : w.values)
        CHECK(v == 0.0);
    CHECK(w.limit_at_infinity == 0.0);
}

TEST_CASE("potential is linear and monotone in the source") {
    const GridPtr grid = grid_for(48, 40.0, 1e-2);
    const RadialFunction f =
        sample(grid, [](double r) { return std::exp(-r * r); }, 0.0, 60.0);
    RadialFunction f2 = f;
    for (double& v : f2.values)
        v *= 2.0;
    const RadialFunction w = riesz_potential(f, grid, 3, 1.0);
    const RadialFunction w2 = riesz_potential(f2, grid, 3, 1.0);
    const double scale = max_abs(w);
    for (std::size_t i = 0; i < w.values.size(); ++i)
        CHECK(w2.values[i] ==
              doctest::Approx(2.0 * w.values[i]).epsilon(1e-13).scale(scale));

    // a pointwise larger source can only raise the potential
    RadialFunction g = f;
    for (std::size_t i = 0; i < g.values.size(); ++i)
        g.values[i] += 0.5 * std::exp(-2.0 * grid->nodes[i]);
    const RadialFunction wg = riesz_potential(g, grid, 3, 1.0);
    for (std::size_t i = 0; i < w.values.size(); ++i)
        CHECK(wg.values[i] >= w.values[i] - 1e-14 * scale);
}

TEST_CASE("potential inverts the operator on the closed form pair") {
    const int n = 3;
    const double alpha = 1.0;
    const GridPtr grid = grid_for(128, 100.0, 2e-3, n + alpha);
    const RadialFunction f = sample(
        grid, [&](double r) { return std::pow(1.0 + r * r, -0.5 * (n + alpha)); },
        0.0, n + alpha);
    const RadialFunction w = riesz_potential(f, grid, n, alpha);

    const double lambda = static_cast<double>(oracle::pair_eigenvalue(n, alpha));
    CHECK(lambda == doctest::Approx(0.5).epsilon(1e-15)); // exact at n = 3, alpha = 1
    CHECK(w.values[0] == doctest::Approx(lambda).epsilon(2e-3));
    for (std::size_t i = 0; i < grid->nodes.size(); ++i) {
        const double r = grid->nodes[i];
        if (r > 25.0)
            break;
        const double expect = lambda * std::pow(1.0 + r * r, -0.5 * (n - alpha));
        CHECK(w.values[i] / expect == doctest::Approx(1.0).epsilon(0.01));
    }
    // source thinner than the mass scale: potential decays at the kernel rate
    CHECK(w.tail_power == doctest::Approx(n - alpha).epsilon(1e-15));
}

TEST_CASE("regions classify by distance against the evaluation radius") {
    CHECK(region_split(1.0, 1.0, 0.0) == Region::Inner); // distance zero
    CHECK(region_split(1.0, 0.5, 0.0) == Region::Inner); // boundary |x|/2
    CHECK(region_split(1.0, 3.0, 0.0) == Region::Middle); // boundary 2|x|
    constexpr double pi = 3.14159265358979323846;
    CHECK(region_split(1.0, 1.0, pi / 3.0) == Region::Middle); // chord length 1
    CHECK(region_split(1.0, 2.5, pi) == Region::Outer);
    CHECK(region_split(2.0, 100.0, 1.0) == Region::Outer);
    CHECK_THROWS_AS(region_split(0.0, 1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(region_split(1.0, -1.0, 0.0), ValidationError);
}

TEST_CASE("region pieces are nonnegative and sum to the potential") {
    const int n = 3;
    const double alpha = 1.0;
    const GridPtr grid = grid_for(160, 200.0, 5e-3, 2.0);
    const RadialFunction f =
        sample(grid, [](double r) { return 1.0 / (1.0 + r * r); }, 0.0, 2.0);
    const RadialFunction w = riesz_potential(f, grid, n, alpha);
    // the last index sits deep enough that the distance bands clip the
    // far-field model, which exercises the piecewise tail quadrature
    for (std::size_t i : {std::size_t(40), std::size_t(90), std::size_t(120),
                          std::size_t(150)}) {
        const double r = grid->nodes[i];
        const PotentialSplit sp = split_contributions(f, r, n, alpha);
        CHECK(sp.inner >= 0.0);
        CHECK(sp.middle >= 0.0);
        CHECK(sp.outer >= 0.0);
        CHECK(sp.total() == doctest::Approx(w.values[i]).epsilon(1e-8));
    }
    CHECK_THROWS_AS(split_contributions(f, 0.0, n, alpha), ValidationError);
    CHECK_THROWS_AS(split_contributions(f, 201.0, n, alpha), ValidationError);
}

TEST_CASE("middle region carries the slow decay witness") {
    // tau = 2 source in dimension three: the potential decays like
    // r^{alpha - tau} = 1/r and the middle band alone already shows it.
    const GridPtr grid = grid_for(160, 200.0, 5e-3, 2.0);
    const RadialFunction f =
        sample(grid, [](double r) { return 1.0 / (1.0 + r * r); }, 0.0, 2.0);
    for (double r : {10.0, 20.0, 40.0, 80.0}) {
        const PotentialSplit sp = split_contributions(f, r, 3, 1.0);
        const double scaled = sp.middle * r;
        CHECK(scaled >= 0.5);
        CHECK(scaled <= 1.2);
        // the singular band never dominates out here
        CHECK(sp.inner <= sp.middle);
    }
}

TEST_CASE("regime classification against the dimension") {
    CHECK(classify_regime(5.0, 3, 1.0) == RegimeClass::TauAboveN);
    CHECK(classify_regime(3.0, 3, 1.0) == RegimeClass::TauEqualsN);
    CHECK(classify_regime(2.0, 3, 1.0) == RegimeClass::TauBelowN);
    CHECK(classify_regime(3.0 + 1e-13, 3, 1.0) == RegimeClass::TauEqualsN);
    CHECK(classify_regime(1.0, 3, 1.0) == RegimeClass::TauBelowN); // tau = alpha is allowed
    CHECK_THROWS_AS(classify_regime(0.5, 3, 1.0), BadTauError);
    CHECK(regime_name(RegimeClass::TauAboveN) == "tau_above_n");
    CHECK(regime_name(RegimeClass::TauEqualsN) == "tau_equals_n");
    CHECK(regime_name(RegimeClass::TauBelowN) == "tau_below_n");
}

TEST_CASE("envelope shapes compose omega with the regime power") {
    const DecayProfile omega = DecayProfile::log_power(2.0);
    const int n = 3;
    const double alpha = 1.0;

    const double r = 10.0;
    const double above = upper_envelope(RegimeClass::TauAboveN, omega, n, alpha, 5.0, r);
    CHECK(above == doctest::Approx(1e-2 * std::pow(1.0 + std::log(10.0), -2.0))
                       .epsilon(1e-12));
    CHECK(above ==
          lower_envelope(RegimeClass::TauAboveN, omega, n, alpha, 5.0, r));

    const double e = std::exp(1.0);
    CHECK(upper_envelope(RegimeClass::TauEqualsN, omega, n, alpha, 3.0, e) ==
          doctest::Approx(omega(e) * std::pow(e, alpha - n))
              .epsilon(1e-12)); // log r = 1 there

    // tau = alpha makes the power factor flat, leaving omega alone
    CHECK(upper_envelope(RegimeClass::TauBelowN, omega, n, alpha, alpha, 7.0) ==
          doctest::Approx(omega(7.0)).epsilon(1e-12));

    CHECK_THROWS_AS(upper_envelope(RegimeClass::TauAboveN, omega, n, alpha, 5.0, 1.5),
                    ValidationError);
}

TEST_CASE("decay exponent fits") {
    const GridPtr grid = grid_for(128, 400.0, 1e-2);

    const RadialFunction pure = sample(
        grid, [](double r) { return std::pow(std::max(r, 1e-6), -2.0); }, 0.0, 2.0);
    CHECK(fit_decay_exponent(pure, 10.0, 100.0) == doctest::Approx(-2.0).epsilon(1e-9));

    const RadialFunction flat = constant_function(grid, 3.0);
    CHECK(fit_decay_exponent(flat, 10.0, 100.0) == doctest::Approx(0.0).epsilon(1e-9));

    // a logarithmic drag shifts the apparent slope well past the pure power
    const RadialFunction dragged = sample(
        grid,
        [](double r) {
            const double rr = std::max(r, 2.0);
            return std::pow(rr, -2.0) * std::pow(1.0 + std::log(rr), -2.0);
        },
        0.0, 2.0);
    const double slope = fit_decay_exponent(dragged, 20.0, 200.0);
    CHECK(slope <= -2.25);
    CHECK(slope >= -2.6);

    RadialFunction touched = pure;
    touched.values[grid->cell_of(50.0)] = 0.0;
    CHECK_THROWS_AS(fit_decay_exponent(touched, 10.0, 100.0), NonPositiveValuesError);
    CHECK_THROWS_AS(fit_decay_exponent(pure, 10.0, 10.5), ValidationError);
}

TEST_CASE("envelope verification on a compactly concentrated source") {
    const GridPtr grid = grid_for(160, 300.0, 5e-3, 2.0);
    const RadialFunction f =
        sample(grid, [](double r) { return std::exp(-r * r); }, 0.0, 60.0);
    const EnvelopeVerification ver =
        verify_envelopes(f, DecayProfile::power(0.05), 3, 1.0, 6.0);
    CHECK(ver.regime == RegimeClass::TauAboveN);
    CHECK(ver.predicted_slope == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(ver.pass());
    CHECK(ver.upper.fitted_slope == doctest::Approx(-2.0).epsilon(0.025));
    CHECK(ver.lower.fitted_slope == doctest::Approx(-2.0).epsilon(0.025));
    CHECK(ver.upper.fitted_C >= ver.lower.fitted_C);
    CHECK(ver.lower.fitted_C > 0.2);
    CHECK(ver.upper.fitted_C < 0.5);
    CHECK(ver.r_start >= 10.0);
    CHECK(ver.r_end == doctest::Approx(300.0));
}

TEST_CASE("sources the potential cannot digest are refused") {
    const GridPtr grid = grid_for(32, 40.0, 1e-2);
    RadialFunction f =
        sample(grid, [](double r) { return 1.0 / (1.0 + r); }, 0.0, 1.0);
    // tail r^{-1} against an order-1 kernel diverges
    CHECK_THROWS_AS(riesz_potential(f, grid, 3, 1.0), NonIntegrableTailError);

    RadialFunction g = sample(
        grid, [](double r) { return 0.3 + std::exp(-r); }, 0.3, 4.0);
    CHECK_THROWS_AS(riesz_potential(g, grid, 3, 1.0), NonzeroSourceLimitError);

    const RadialFunction ok = sample(grid, [](double r) { return std::exp(-r); },
                                     0.0, 8.0);
    CHECK_THROWS_AS(riesz_potential(ok, grid, 3, 3.0), ValidationError);
    CHECK_THROWS_AS(riesz_potential(ok, grid, 3, 0.0), ValidationError);
}
