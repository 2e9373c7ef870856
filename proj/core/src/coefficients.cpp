#include "fraclap/coefficients.hpp"

#include <cmath>
#include <string>

#include "fraclap/errors.hpp"

namespace fraclap {

namespace {

RadialFunction sample_under_envelope(const GridPtr& grid, double theta, double tau,
                                     const DecayProfile& omega,
                                     const std::function<double(double)>& shape,
                                     double lo, double hi, const char* label) {
    RadialFunction f;
    f.grid = grid;
    f.values.resize(grid->nodes.size());
    f.limit_at_infinity = 0.0;
    // omega is nonincreasing, so the envelope decays at least like r^{-tau};
    // advertising tau keeps tail extrapolation conservative.
    f.tail_power = tau;
    for (std::size_t i = 0; i < grid->nodes.size(); ++i) {
        const double r = grid->nodes[i];
        const double s = shape(r);
        if (!std::isfinite(s) || s < lo || s > hi) {
            throw EnvelopeViolationError(std::string(label) + " shape value " +
                                         std::to_string(s) + " at r = " + std::to_string(r) +
                                         " is outside [" + std::to_string(lo) + ", " +
                                         std::to_string(hi) + "]");
        }
        f.values[i] = s * envelope(theta, tau, omega, r);
    }
    return f;
}

} // namespace

CoefficientPair make_coefficient_pair(const GridPtr& grid, double theta, double tau,
                                      double alpha, const DecayProfile& omega,
                                      const std::function<double(double)>& shape_k,
                                      const std::function<double(double)>& shape_K) {
    if (!grid) {
        throw ValidationError("make_coefficient_pair: null grid");
    }
    if (!(tau >= alpha)) {
        throw BadTauError("coefficient decay exponent tau = " + std::to_string(tau) +
                          " must be at least the operator order alpha = " +
                          std::to_string(alpha));
    }
    dini_integral(omega); // rejects non-monotone or Dini-divergent profiles up front

    CoefficientPair pair;
    pair.theta = theta;
    pair.tau = tau;
    pair.k = sample_under_envelope(grid, theta, tau, omega, shape_k, 0.0, 1.0, "absorption");
    pair.K = sample_under_envelope(grid, theta, tau, omega, shape_K, -1.0, 1.0, "source");
    return pair;
}

void check_coefficient_envelopes(const CoefficientPair& pair, const DecayProfile& omega) {
    require_same_grid(pair.k, pair.K);
    const auto& nodes = pair.k.grid->nodes;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double env = envelope(pair.theta, pair.tau, omega, nodes[i]);
        if (!(pair.k.values[i] >= 0.0) || pair.k.values[i] > env) {
            throw EnvelopeViolationError("absorption coefficient leaves [0, envelope] at r = " +
                                         std::to_string(nodes[i]));
        }
        if (std::abs(pair.K.values[i]) > env) {
            throw EnvelopeViolationError("source coefficient exceeds envelope at r = " +
                                         std::to_string(nodes[i]));
        }
    }
}

} // namespace fraclap
