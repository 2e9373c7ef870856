#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "fraclap/coefficients.hpp"
#include "fraclap/decay_profile.hpp"
#include "fraclap/errors.hpp"
#include "fraclap/nonlocal_operator.hpp"
#include "fraclap/perron.hpp"
#include "fraclap/radial_grid.hpp"
#include "fraclap/subsuper.hpp"

using namespace fraclap;

namespace {

constexpr int kDim = 3;
constexpr double kAlpha = 1.0;
constexpr double kTau = 3.0;
constexpr double kP = 2.0;
constexpr double kBudget = 1.0;

GridPtr fixture_grid() {
    static const GridPtr grid = [] {
        GridSpec spec;
        spec.cells = 128;
        spec.r_max = 100.0;
        spec.first_cell = 2e-3;
        spec.tail_exponent_hint = kTau - kAlpha;
        return make_graded_grid(spec);
    }();
    return grid;
}

const NonlocalOperator& fixture_op() {
    static const NonlocalOperator op = assemble_flap_matrix(fixture_grid(), kDim, kAlpha);
    return op;
}

const DecayProfile& fixture_omega() {
    static const DecayProfile omega = DecayProfile::power(0.5);
    return omega;
}

const OrderedPair& fixture_pair() {
    static const OrderedPair pair =
        make_ordered_pair(0.5, fixture_omega(), kTau, kBudget, fixture_grid(), kDim, kAlpha);
    return pair;
}

double shape_k_generic(double r) { return 0.5 + 0.5 * std::sin(r); }
double shape_K_generic(double r) { return std::cos(0.5 * r); }

CoefficientPair coeffs_at(double theta) {
    return make_coefficient_pair(fixture_grid(), theta, kTau, kAlpha, fixture_omega(),
                                 shape_k_generic, shape_K_generic);
}

CoefficientPair corner_coeffs(double theta, double ck, double cK) {
    return make_coefficient_pair(
        fixture_grid(), theta, kTau, kAlpha, fixture_omega(),
        [ck](double) { return ck; }, [cK](double) { return cK; });
}

} // namespace

TEST_CASE("ordered pair brackets the level symmetrically") {
    const OrderedPair& pair = fixture_pair();
    const GridPtr grid = fixture_grid();
    CHECK(pair.a == 0.5);
    CHECK(pair.theta1 == kBudget);
    CHECK(pair.C_used > 0.0);
    CHECK(pair.C_used <= kBudget);
    CHECK(pair.sub.limit_at_infinity == 0.5);
    CHECK(pair.super.limit_at_infinity == 0.5);
    for (std::size_t i = 0; i < grid->nodes.size(); ++i) {
        const double lo = pair.sub.values[i];
        const double hi = pair.super.values[i];
        CHECK(lo > 0.0);
        CHECK(hi < 1.0);
        CHECK(hi >= lo);
        // both halves come from one potential evaluation, so they mirror
        // about the level to the last bit
        CHECK(lo + hi == doctest::Approx(1.0).epsilon(1e-15));
        // the cap keeps the subsolution at or above half the level
        CHECK(lo >= 0.25 - 1e-15);
    }
    // the potential of a decaying source decreases outward, so the
    // subsolution climbs toward its far-field level
    for (std::size_t i = 0; i + 1 < grid->nodes.size(); ++i)
        CHECK(pair.sub.values[i + 1] >= pair.sub.values[i] - 1e-14);
}

TEST_CASE("bracket halves solve the linear comparison problem") {
    const OrderedPair& pair = fixture_pair();
    const GridPtr grid = fixture_grid();
    const DecayProfile& omega = fixture_omega();
    const RadialFunction Ls = apply_flap(fixture_op(), pair.sub);
    double g_sup = 0.0;
    for (std::size_t i = 0; i + 1 < grid->nodes.size(); ++i) {
        const double r = grid->nodes[i];
        g_sup = std::max(g_sup, pair.C_used * omega(r) * std::pow(1.0 + r, -kTau));
    }
    // flap(a - C w) should reproduce -C omega (1+r)^{-tau}; the two sides
    // come from independent discretizations (quadrature vs matrix), so the
    // agreement is limited by the coarser of the two
    for (std::size_t i = 0; i + 1 < grid->nodes.size(); ++i) {
        const double r = grid->nodes[i];
        const double expect = -pair.C_used * omega(r) * std::pow(1.0 + r, -kTau);
        CHECK(Ls.values[i] == doctest::Approx(expect).epsilon(2e-3).scale(g_sup));
    }
}

TEST_CASE("a tiny budget pins the bracket to its level") {
    const BuiltSolution lo =
        build_subsolution(0.5, fixture_omega(), kTau, 1e-8, fixture_grid(), kDim, kAlpha);
    const BuiltSolution hi =
        build_supersolution(0.5, fixture_omega(), kTau, 1e-8, fixture_grid(), kDim, kAlpha);
    CHECK(lo.C_used <= 1e-8);
    CHECK(hi.C_used <= 1e-8);
    for (double v : lo.u.values) {
        CHECK(v <= 0.5);
        CHECK(v == doctest::Approx(0.5).epsilon(1e-7));
    }
    for (double v : hi.u.values)
        CHECK(v >= 0.5);
}

TEST_CASE("supersolution cap keeps the bracket below one") {
    const BuiltSolution hi =
        build_supersolution(0.9, fixture_omega(), kTau, kBudget, fixture_grid(), kDim, kAlpha);
    for (double v : hi.u.values) {
        CHECK(v < 1.0);
        CHECK(v <= 0.95 + 1e-12);
    }
}

TEST_CASE("admissible theta certifies the corner coefficients") {
    const OrderedPair& pair = fixture_pair();
    const NonlocalOperator& op = fixture_op();
    const double theta = admissible_theta(pair, op, fixture_omega(), kTau, kP);
    CHECK(theta > 0.0);

    // residuals grow with theta, so the certified value and anything below
    // it pass at all four envelope corners while a tenfold push fails
    for (double t : {theta, 0.5 * theta}) {
        for (double ck : {0.0, 1.0})
            for (double cK : {-1.0, 1.0}) {
                const CoefficientPair cp = corner_coeffs(t, ck, cK);
                CHECK(check_subsolution(op, pair.sub, cp, kP).pass);
                CHECK(check_supersolution(op, pair.super, cp, kP).pass);
            }
    }
    bool any_fail = false;
    for (double ck : {0.0, 1.0})
        for (double cK : {-1.0, 1.0}) {
            const CoefficientPair cp = corner_coeffs(10.0 * theta, ck, cK);
            any_fail = any_fail || !check_subsolution(op, pair.sub, cp, kP).pass ||
                       !check_supersolution(op, pair.super, cp, kP).pass;
        }
    CHECK(any_fail);
}

TEST_CASE("residual reports match a by-hand recompute") {
    const OrderedPair& pair = fixture_pair();
    const NonlocalOperator& op = fixture_op();
    const double theta = admissible_theta(pair, op, fixture_omega(), kTau, kP);
    const CoefficientPair cp = coeffs_at(theta);

    const ResidualReport report = check_subsolution(op, pair.sub, cp, kP);
    CHECK(report.pass);
    CHECK(report.tol >= 1e-8);

    const RadialFunction Lu = apply_flap(op, pair.sub);
    const std::size_t interior = fixture_grid()->nodes.size() - 1;
    REQUIRE(report.residuals.size() == interior);
    double lo = report.residuals[0], hi = report.residuals[0];
    for (std::size_t i = 0; i < interior; ++i) {
        const double u = pair.sub.values[i];
        const double d =
            Lu.values[i] + cp.k.values[i] * u - cp.K.values[i] * std::pow(u, kP);
        CHECK(report.residuals[i] == doctest::Approx(d).epsilon(1e-12));
        lo = std::min(lo, report.residuals[i]);
        hi = std::max(hi, report.residuals[i]);
    }
    CHECK(report.max_residual == hi);
    CHECK(report.min_residual == lo);
    CHECK(report.max_residual <= report.tol);

    const ResidualReport above = check_supersolution(op, pair.super, cp, kP);
    CHECK(above.pass);
    CHECK(above.min_residual >= -above.tol);
}

TEST_CASE("zero coefficients collapse the iteration onto the level") {
    const OrderedPair& pair = fixture_pair();
    const SolveResult res =
        perron_solve(fixture_op(), pair, corner_coeffs(0.0, 0.0, 0.0), kP);
    CHECK(res.iterations <= 3);
    CHECK(res.monotone_violations == 0);
    for (double v : res.u.values)
        CHECK(v == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(res.limit_estimate == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("monotone iteration converges inside the bracket") {
    const OrderedPair& pair = fixture_pair();
    const NonlocalOperator& op = fixture_op();
    const double theta = admissible_theta(pair, op, fixture_omega(), kTau, kP);
    const CoefficientPair cp = coeffs_at(theta / 64.0);

    const SolveResult res = perron_solve(op, pair, cp, kP);
    CHECK(res.monotone_violations == 0);
    double K_sup = 0.0;
    for (double v : cp.K.values)
        K_sup = std::max(K_sup, std::fabs(v));
    CHECK(res.residual_inf <= 1e-6 * (1.0 + K_sup));
    for (std::size_t i = 0; i < res.u.values.size(); ++i) {
        CHECK(res.u.values[i] >= pair.sub.values[i] - 1e-12);
        CHECK(res.u.values[i] <= pair.super.values[i] + 1e-12);
    }
    CHECK(res.limit_estimate == doctest::Approx(0.5).epsilon(1e-5));

    // descending from the supersolution meets the same fixed point and
    // never crosses below the ascending iterate
    PerronOptions above;
    above.from_above = true;
    const SolveResult dec = perron_solve(op, pair, cp, kP, above);
    for (std::size_t i = 0; i < dec.u.values.size(); ++i) {
        CHECK(dec.u.values[i] >= res.u.values[i] - 10.0 * above.tol);
        CHECK(std::fabs(dec.u.values[i] - res.u.values[i]) <= 100.0 * above.tol);
    }
}

TEST_CASE("solver refuses a swapped bracket and a starved iteration") {
    const OrderedPair& pair = fixture_pair();
    const NonlocalOperator& op = fixture_op();
    const double theta = admissible_theta(pair, op, fixture_omega(), kTau, kP);
    const CoefficientPair cp = coeffs_at(theta / 64.0);

    OrderedPair swapped = pair;
    std::swap(swapped.sub, swapped.super);
    CHECK_THROWS_AS(perron_solve(op, swapped, cp, kP), NotOrderedError);

    PerronOptions starved;
    starved.max_iter = 1;
    CHECK_THROWS_AS(perron_solve(op, pair, cp, kP, starved), NoConvergenceError);
}

TEST_CASE("far-field extrapolation on known tails") {
    const GridPtr grid = fixture_grid();
    CHECK(limit_at_infinity(constant_function(grid, 0.5)) == 0.5);

    const RadialFunction pw = sample(
        grid, [](double r) { return 0.5 - 1.0 / std::max(r, 1e-6); }, 0.5, 1.0);
    CHECK(limit_at_infinity(pw) == doctest::Approx(0.5).epsilon(1e-12));

    // a growing tail has not settled and the fit must say so
    const RadialFunction grow =
        sample(grid, [](double r) { return std::pow(r, 5.0); }, 0.0, 1.0);
    CHECK_THROWS_AS(limit_at_infinity(grow), TailNotSettledError);
}

TEST_CASE("family of solutions with distinct far-field levels") {
    const NonlocalOperator& op = fixture_op();
    const auto zero = [](double) { return 0.0; };
    const FamilyReport plain = solution_family({0.3, 0.5, 0.7}, op, fixture_omega(),
                                               kTau, kP, kBudget, zero, zero);
    CHECK(plain.exponent_p == kP);
    CHECK(plain.theta_used > 0.0);
    CHECK(plain.distinct_limits);
    CHECK(plain.all_positive);
    REQUIRE(plain.members.size() == 3);
    for (const auto& m : plain.members) {
        CHECK(m.result.limit_estimate == doctest::Approx(m.a).epsilon(1e-12));
        CHECK(m.min_value >= m.a - 1e-12);
    }

    const FamilyReport generic =
        solution_family({0.3, 0.6}, op, fixture_omega(), kTau, kP, kBudget,
                        shape_k_generic, shape_K_generic, 1.0 / 64.0);
    CHECK(generic.distinct_limits);
    CHECK(generic.all_positive);
    REQUIRE(generic.members.size() == 2);
    double sup_dist = 0.0;
    const auto& u0 = generic.members[0].result.u.values;
    const auto& u1 = generic.members[1].result.u.values;
    for (std::size_t i = 0; i < u0.size(); ++i)
        sup_dist = std::max(sup_dist, std::fabs(u1[i] - u0[i]));
    CHECK(sup_dist >= 0.1);
}

TEST_CASE("a singleton family reproduces the manual pipeline bitwise") {
    const NonlocalOperator& op = fixture_op();
    const FamilyReport fam =
        solution_family({0.5}, op, fixture_omega(), kTau, kP, kBudget,
                        shape_k_generic, shape_K_generic, 1.0 / 64.0);
    REQUIRE(fam.members.size() == 1);

    const OrderedPair pair =
        make_ordered_pair(0.5, fixture_omega(), kTau, kBudget, fixture_grid(), kDim, kAlpha);
    const double theta = admissible_theta(pair, op, fixture_omega(), kTau, kP);
    CHECK(fam.theta_used == theta / 64.0);
    const SolveResult res = perron_solve(op, pair, coeffs_at(theta / 64.0), kP);
    REQUIRE(res.u.values.size() == fam.members[0].result.u.values.size());
    for (std::size_t i = 0; i < res.u.values.size(); ++i)
        CHECK(res.u.values[i] == fam.members[0].result.u.values[i]);
}
