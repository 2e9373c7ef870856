#include "fraclap/subsuper.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fraclap/errors.hpp"
#include "fraclap/riesz_potential.hpp"

namespace fraclap {

namespace {

void check_level(double a) {
    if (!(a > 0.0) || !(a < 1.0))
        throw ValidationError("target level a must lie in (0, 1), got " +
                              std::to_string(a));
}

// Potential of the unit-amplitude source omega(s) (1+s)^{-tau}; every C is a
// rescale of this by linearity, so it is computed once per construction.
RadialFunction unit_potential(const DecayProfile& omega, double tau,
                              const GridPtr& grid, int dimension, double alpha) {
    if (!(tau > alpha))
        throw BadTauError("bracket source needs tau > alpha for an integrable "
                          "potential, got tau = " +
                          std::to_string(tau));
    dini_integral(omega); // rejects divergent weights up front
    const RadialFunction g = sample(
        grid, [&](double r) { return omega(r) * std::pow(1.0 + r, -tau); }, 0.0,
        tau);
    return riesz_potential(g, grid, dimension, alpha);
}

double capped_amplitude(const RadialFunction& p1, double budget, double margin) {
    double sup = 0.0;
    for (double v : p1.values)
        sup = std::max(sup, v);
    if (!(sup > 0.0) || !std::isfinite(sup))
        throw CannotFitBudgetError(
            "potential of the unit source is not positive and finite; cannot "
            "choose any C");
    return std::min(budget, margin / sup);
}

RadialFunction shifted(const RadialFunction& p1, double a, double c) {
    RadialFunction u;
    u.grid = p1.grid;
    u.values.resize(p1.values.size());
    for (std::size_t i = 0; i < p1.values.size(); ++i)
        u.values[i] = a + c * p1.values[i];
    u.limit_at_infinity = a;
    u.tail_power = p1.tail_power;
    return u;
}

double power_term(double u, double p) {
    return std::exp(p * std::log(std::max(u, 1e-14)));
}

ResidualReport residual_report(const NonlocalOperator& op, const RadialFunction& U,
                               const CoefficientPair& coeffs, double p) {
    require_same_grid(U, op.grid);
    require_same_grid(coeffs.k, op.grid);
    require_same_grid(coeffs.K, op.grid);
    if (!(p > 1.0))
        throw ValidationError("nonlinearity exponent must exceed 1, got " +
                              std::to_string(p));

    const RadialFunction flap_u = apply_flap(op, U);
    const std::size_t interior = U.values.size() - 1;

    ResidualReport rep;
    rep.residuals.resize(interior);
    double norm_flap = 0.0, norm_absorb = 0.0, norm_source = 0.0;
    for (std::size_t i = 0; i < interior; ++i) {
        const double absorb = coeffs.k.values[i] * U.values[i];
        const double source = coeffs.K.values[i] * power_term(U.values[i], p);
        rep.residuals[i] = flap_u.values[i] + absorb - source;
        norm_flap = std::max(norm_flap, std::abs(flap_u.values[i]));
        norm_absorb = std::max(norm_absorb, std::abs(absorb));
        norm_source = std::max(norm_source, std::abs(source));
    }
    rep.max_residual = *std::max_element(rep.residuals.begin(), rep.residuals.end());
    rep.min_residual = *std::min_element(rep.residuals.begin(), rep.residuals.end());
    rep.tol = 1e-8 + 1e-6 * std::max({norm_flap, norm_absorb, norm_source});
    return rep;
}

} // namespace

BuiltSolution build_subsolution(double a, const DecayProfile& omega, double tau,
                                double theta1_budget, const GridPtr& grid,
                                int dimension, double alpha) {
    check_level(a);
    if (!(theta1_budget > 0.0))
        throw ValidationError("theta1_budget must be positive");
    const RadialFunction p1 = unit_potential(omega, tau, grid, dimension, alpha);
    const double c = capped_amplitude(p1, theta1_budget, 0.5 * a);
    return {shifted(p1, a, -c), c};
}

BuiltSolution build_supersolution(double a, const DecayProfile& omega, double tau,
                                  double theta1_budget, const GridPtr& grid,
                                  int dimension, double alpha) {
    check_level(a);
    if (!(theta1_budget > 0.0))
        throw ValidationError("theta1_budget must be positive");
    const RadialFunction p1 = unit_potential(omega, tau, grid, dimension, alpha);
    const double c =
        capped_amplitude(p1, theta1_budget, 0.5 * std::min(a, 1.0 - a));
    return {shifted(p1, a, c), c};
}

OrderedPair make_ordered_pair(double a, const DecayProfile& omega, double tau,
                              double theta1_budget, const GridPtr& grid,
                              int dimension, double alpha) {
    check_level(a);
    if (!(theta1_budget > 0.0))
        throw ValidationError("theta1_budget must be positive");
    const RadialFunction p1 = unit_potential(omega, tau, grid, dimension, alpha);
    const double c =
        capped_amplitude(p1, theta1_budget, 0.5 * std::min(a, 1.0 - a));
    OrderedPair pair;
    pair.sub = shifted(p1, a, -c);
    pair.super = shifted(p1, a, c);
    pair.a = a;
    pair.C_used = c;
    pair.theta1 = theta1_budget;
    return pair;
}

ResidualReport check_subsolution(const NonlocalOperator& op, const RadialFunction& U,
                                 const CoefficientPair& coeffs, double p) {
    ResidualReport rep = residual_report(op, U, coeffs, p);
    rep.pass = rep.max_residual <= rep.tol;
    return rep;
}

ResidualReport check_supersolution(const NonlocalOperator& op, const RadialFunction& U,
                                   const CoefficientPair& coeffs, double p) {
    ResidualReport rep = residual_report(op, U, coeffs, p);
    rep.pass = rep.min_residual >= -rep.tol;
    return rep;
}

double admissible_theta(const OrderedPair& pair, const NonlocalOperator& op,
                        const DecayProfile& omega, double tau, double p) {
    require_same_grid(pair.sub, op.grid);
    require_same_grid(pair.super, op.grid);
    if (!(pair.C_used > 0.0))
        throw ValidationError("admissible_theta: pair has no source amplitude");

    const auto passes_at = [&](double theta) {
        // The four envelope corners dominate every admissible coefficient
        // pointwise: k at its ceiling hurts the subsolution, K at the
        // matching sign hurts whichever side it is checked against.
        for (double shape_k : {0.0, 1.0}) {
            for (double shape_K : {-1.0, 1.0}) {
                const CoefficientPair corner = make_coefficient_pair(
                    op.grid, theta, tau, op.order_alpha, omega,
                    [=](double) { return shape_k; }, [=](double) { return shape_K; });
                if (!check_subsolution(op, pair.sub, corner, p).pass)
                    return false;
                if (!check_supersolution(op, pair.super, corner, p).pass)
                    return false;
            }
        }
        return true;
    };

    for (int j = 6; j >= -40; --j) {
        const double theta = std::ldexp(pair.C_used, j);
        if (passes_at(theta))
            return theta;
    }
    // Mathematically unreachable: as theta -> 0 the corner coefficients
    // vanish and the residuals reduce to the strict-sign source term.
    throw NumericalError("admissible_theta: no dyadic theta down to C*2^-40 "
                         "passed the residual checks");
}

} // namespace fraclap
