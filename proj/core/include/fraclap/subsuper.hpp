#ifndef FRACLAP_SUBSUPER_HPP
#define FRACLAP_SUBSUPER_HPP

#include <vector>

#include "fraclap/coefficients.hpp"
#include "fraclap/decay_profile.hpp"
#include "fraclap/nonlocal_operator.hpp"
#include "fraclap/radial_function.hpp"

namespace fraclap {

// Ordered bracket around a target constant level a in (0, 1):
//
//   sub   = a - C * I_alpha[omega(s) (1+s)^{-tau}]   (approaches a from below)
//   super = a + C * I_alpha[omega(s) (1+s)^{-tau}]   (from above)
//
// Both are exact solutions of the linear problem with right-hand side
// -/+ C omega (1+r)^{-tau}, which is what makes them a sub/supersolution
// bracket once the semilinear coefficients are small enough (see
// admissible_theta). C is capped so that 0 < sub <= a <= super < 1 holds
// strictly with margin: the potential never exceeds min(a, 1-a)/2.
struct OrderedPair {
    RadialFunction sub;
    RadialFunction super;
    double a = 0.5;
    double C_used = 0.0;
    double theta1 = 0.0; // the budget C was chosen under
};

struct BuiltSolution {
    RadialFunction u;
    double C_used = 0.0;
};

// Largest C <= theta1_budget keeping sup of the potential at or below a/2,
// so the subsolution stays at or above a/2 > 0. CannotFitBudgetError is
// defensive: it fires only if the potential of the unit source fails to be
// positive and finite.
BuiltSolution build_subsolution(double a, const DecayProfile& omega, double tau,
                                double theta1_budget, const GridPtr& grid,
                                int dimension, double alpha);

// Mirror construction; C additionally capped by (1-a)/2 so super < 1.
BuiltSolution build_supersolution(double a, const DecayProfile& omega, double tau,
                                  double theta1_budget, const GridPtr& grid,
                                  int dimension, double alpha);

// Builds both halves from one potential evaluation and the shared
// C = min of the two caps, which keeps the bracket symmetric about a.
OrderedPair make_ordered_pair(double a, const DecayProfile& omega, double tau,
                              double theta1_budget, const GridPtr& grid,
                              int dimension, double alpha);

// Residuals d(r) = (flap U)(r) + k(r) U(r) - K(r) U(r)^p at the interior
// nodes (the boundary node carries the far-field value and has no equation).
// A subsolution needs max d <= tol, a supersolution min d >= -tol, with
// tol = 1e-8 + 1e-6 * (largest sup norm among the three terms): scaled so
// quadrature-level noise never decides the verdict.
struct ResidualReport {
    std::vector<double> residuals;
    double max_residual = 0.0;
    double min_residual = 0.0;
    double tol = 0.0;
    bool pass = false;
};

ResidualReport check_subsolution(const NonlocalOperator& op, const RadialFunction& U,
                                 const CoefficientPair& coeffs, double p);
ResidualReport check_supersolution(const NonlocalOperator& op, const RadialFunction& U,
                                   const CoefficientPair& coeffs, double p);

// Largest dyadic multiple of pair.C_used for which both residual checks
// pass with the coefficients pushed to the corners of their envelope
// (k at 0 and at the full envelope, K at plus and minus the full envelope).
// Those corners dominate every admissible coefficient choice pointwise, so
// any (k, K) under the returned theta inherits the bracket. The operator
// must be assembled on the pair's grid.
double admissible_theta(const OrderedPair& pair, const NonlocalOperator& op,
                        const DecayProfile& omega, double tau, double p);

} // namespace fraclap

#endif
