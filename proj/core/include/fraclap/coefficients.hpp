#ifndef FRACLAP_COEFFICIENTS_HPP
#define FRACLAP_COEFFICIENTS_HPP

#include <functional>

#include "fraclap/decay_profile.hpp"
#include "fraclap/radial_function.hpp"

namespace fraclap {

// Absorption/source coefficient pair for the semilinear problem, sampled on
// a shared grid and pinned under the envelope theta * omega(r) * (1+r)^{-tau}:
//
//   0 <= k(r) <= envelope(r),   |K(r)| <= envelope(r)   at every node.
//
// Both bounds hold exactly in floating point because the samples are built
// as shape * envelope with shape_k in [0, 1] and shape_K in [-1, 1].
struct CoefficientPair {
    double theta = 0.0;
    double tau = 0.0;
    RadialFunction k;
    RadialFunction K;
};

// Throws BadTauError when tau < alpha (the far-field decay would be too slow
// for the operator order) and EnvelopeViolationError when a shape function
// leaves its admissible range at a node.
CoefficientPair make_coefficient_pair(const GridPtr& grid, double theta, double tau,
                                      double alpha, const DecayProfile& omega,
                                      const std::function<double(double)>& shape_k,
                                      const std::function<double(double)>& shape_K);

// Re-verifies the envelope bounds of an existing pair nodewise.
void check_coefficient_envelopes(const CoefficientPair& pair, const DecayProfile& omega);

} // namespace fraclap

#endif
