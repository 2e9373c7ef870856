#ifndef FRACLAP_ENVELOPES_HPP
#define FRACLAP_ENVELOPES_HPP

#include <string>
#include <vector>

#include "fraclap/decay_profile.hpp"
#include "fraclap/radial_function.hpp"

namespace fraclap {

// Asymptotic regime of the potential of a source ~ omega(r) r^{-tau}:
// above the dimension the potential decays like the kernel itself, below it
// the source shines through, and exactly at the dimension a logarithm
// appears.
enum class RegimeClass { TauAboveN, TauEqualsN, TauBelowN };

// Stable lowercase token for reports and CSV summaries.
std::string regime_name(RegimeClass regime);

// Requires tau >= alpha (BadTauError otherwise). Equality with the
// dimension is decided at 1e-12 absolute.
RegimeClass classify_regime(double tau, int dimension, double alpha);

// Shape of the asymptotic bound at radius r >= 2, without the uniform
// constant:
//
//   TauAboveN    r^{alpha - n} omega(r)
//   TauEqualsN   r^{alpha - n} omega(r) log r
//   TauBelowN    omega(r) r^{alpha - tau}
//
// Upper and lower bounds share the same shapes; only the constants differ,
// which is why both functions exist but agree. Radii below 2 are outside
// the asymptotic range and rejected.
double upper_envelope(RegimeClass regime, const DecayProfile& omega,
                      int dimension, double alpha, double tau, double r);
double lower_envelope(RegimeClass regime, const DecayProfile& omega,
                      int dimension, double alpha, double tau, double r);

// Least-squares slope of log w against log r over the grid nodes with
// r_start <= r <= r_end. Needs at least 10 nodes in the window and strictly
// positive w there (NonPositiveValuesError otherwise).
double fit_decay_exponent(const RadialFunction& w, double r_start, double r_end);

struct EnvelopeReport {
    std::vector<double> radii;
    std::vector<double> w_values;
    std::vector<double> bound_values; // shape without the constant
    double fitted_C = 0.0;
    double fitted_slope = 0.0;
    bool pass = false;
};

struct EnvelopeVerification {
    RegimeClass regime = RegimeClass::TauAboveN;
    double predicted_slope = 0.0; // alpha-n or alpha-tau; 0 for the log regime
    double r_start = 0.0;
    double r_end = 0.0;
    // max(w/shape) over the window; w <= fitted_C * shape by construction,
    // so the content of `pass` is finiteness, positivity, and the slope.
    EnvelopeReport upper;
    // min(w/shape); the mirror statement from below.
    EnvelopeReport lower;

    bool pass() const { return upper.pass && lower.pass; }
};

// Computes w = riesz_potential(f) and checks it against the regime shapes
// over [r_start, r_end]. r_start = 0 selects max(10, 2 * source mass
// radius); r_end = 0 selects r_max. For the two power regimes the check is
// |fitted slope - predicted| <= 0.15; the log regime fits the ratio of w to
// its shape to a constant instead and accepts a spread of at most 25%, since
// a slope cannot resolve a logarithm over two decades.
EnvelopeVerification verify_envelopes(const RadialFunction& f,
                                      const DecayProfile& omega, int dimension,
                                      double alpha, double tau,
                                      double r_start = 0.0, double r_end = 0.0);

} // namespace fraclap

#endif
