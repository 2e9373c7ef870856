#ifndef FRACLAP_PERRON_HPP
#define FRACLAP_PERRON_HPP

#include <functional>
#include <vector>

#include "fraclap/coefficients.hpp"
#include "fraclap/nonlocal_operator.hpp"
#include "fraclap/subsuper.hpp"

namespace fraclap {

struct PerronOptions {
    int max_iter = 200;
    double tol = 1e-10;      // sup-norm step size that counts as converged
    bool from_above = false; // start at the supersolution instead
};

struct SolveResult {
    RadialFunction u;
    int iterations = 0;
    double residual_inf = 0.0;   // sup of |flap u + k u - K u^p| over interior nodes
    double limit_estimate = 0.0; // extrapolated value at infinity
    int monotone_violations = 0; // iteration steps that moved the wrong way
};

// Monotone iteration between the ordered bracket: each sweep solves the
// linear system
//
//   (L + k + M) u_next = K u^p + M u    (far-field value pinned to a)
//
// with a shift M large enough that the right-hand side is nondecreasing in
// u. The system matrix inherits nonnegative couplings from the operator, so
// iterates launched at the subsolution climb, iterates launched at the
// supersolution descend, and both stay inside the bracket. The factorization
// is done once and each sweep is a back-substitution.
//
// Throws NotOrderedError when the bracket is not actually ordered,
// LinearSolveFailureError when the factored system fails its solve-residual
// check, NoConvergenceError when max_iter sweeps do not reach tol. The
// limit_estimate falls back to u(r_max) when the tail is too flat to
// extrapolate.
SolveResult perron_solve(const NonlocalOperator& op, const OrderedPair& pair,
                         const CoefficientPair& coeffs, double p,
                         const PerronOptions& opts = {});

// Value at infinity by fitting limit + c r^{-q} through the samples nearest
// r_max, r_max/2, r_max/4. Exact for constants and for pure power
// approaches. Throws TailNotSettledError when the outer difference exceeds
// ten times the inner one (the tail has not begun to converge) or when the
// differences fail to shrink outward at all.
double limit_at_infinity(const RadialFunction& u);

struct FamilyMember {
    double a = 0.0;
    OrderedPair pair;
    SolveResult result;
    double min_value = 0.0;
};

struct FamilyReport {
    std::vector<FamilyMember> members;
    double theta_used = 0.0;
    double exponent_p = 0.0;
    // Limits separated by at least half the spacing of their levels.
    bool distinct_limits = false;
    // Every member stays above half its level (minus roundoff slack).
    bool all_positive = false;
};

// One solve per level in a_list, all under a single coefficient pair built
// at theta_used = theta_fraction * min over levels of admissible_theta.
// The fraction (in (0, 1]) trades bracket width for contraction speed: the
// admissibility corners certify any value at or below 1.
FamilyReport solution_family(const std::vector<double>& a_list,
                             const NonlocalOperator& op, const DecayProfile& omega,
                             double tau, double p, double theta1_budget,
                             const std::function<double(double)>& shape_k,
                             const std::function<double(double)>& shape_K,
                             double theta_fraction = 1.0,
                             const PerronOptions& opts = {});

} // namespace fraclap

#endif
