#include "fraclap/envelopes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fraclap/errors.hpp"
#include "fraclap/riesz_potential.hpp"

namespace fraclap {

namespace {

constexpr double kSlopeTol = 0.15;
constexpr double kLogRegimeSpread = 1.25;

double shape_value(RegimeClass regime, const DecayProfile& omega, int dimension,
                   double alpha, double tau, double r) {
    if (!(r >= 2.0))
        throw ValidationError(
            "envelope shapes describe the far field; need r >= 2");
    switch (regime) {
    case RegimeClass::TauAboveN:
        return std::pow(r, alpha - dimension) * omega(r);
    case RegimeClass::TauEqualsN:
        return std::pow(r, alpha - dimension) * omega(r) * std::log(r);
    case RegimeClass::TauBelowN:
        return omega(r) * std::pow(r, alpha - tau);
    }
    throw ValidationError("envelope: unknown regime");
}

// Radius enclosing half of the source's absolute mass, used to pick where
// "far field" starts when the caller does not say. Trapezoid accuracy is
// plenty for a heuristic window edge.
double source_mass_radius(const RadialFunction& f, int dimension) {
    const auto& r = f.grid->nodes;
    std::vector<double> cumulative(r.size(), 0.0);
    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        const double gl = std::abs(f.values[i]) * std::pow(r[i], dimension - 1);
        const double gr = std::abs(f.values[i + 1]) * std::pow(r[i + 1], dimension - 1);
        mass += 0.5 * (gl + gr) * (r[i + 1] - r[i]);
        cumulative[i + 1] = mass;
    }
    if (mass <= 0.0)
        return r.back();
    for (std::size_t i = 0; i < r.size(); ++i)
        if (cumulative[i] >= 0.5 * mass)
            return r[i];
    return r.back();
}

} // namespace

std::string regime_name(RegimeClass regime) {
    switch (regime) {
    case RegimeClass::TauAboveN:
        return "tau_above_n";
    case RegimeClass::TauEqualsN:
        return "tau_equals_n";
    case RegimeClass::TauBelowN:
        return "tau_below_n";
    }
    return "unknown";
}

RegimeClass classify_regime(double tau, int dimension, double alpha) {
    if (!(tau >= alpha))
        throw BadTauError("classify_regime: tau must be at least alpha, got tau=" +
                          std::to_string(tau) + " alpha=" + std::to_string(alpha));
    const double gap = tau - dimension;
    if (std::abs(gap) <= 1e-12)
        return RegimeClass::TauEqualsN;
    return gap > 0.0 ? RegimeClass::TauAboveN : RegimeClass::TauBelowN;
}

double upper_envelope(RegimeClass regime, const DecayProfile& omega, int dimension,
                      double alpha, double tau, double r) {
    return shape_value(regime, omega, dimension, alpha, tau, r);
}

double lower_envelope(RegimeClass regime, const DecayProfile& omega, int dimension,
                      double alpha, double tau, double r) {
    return shape_value(regime, omega, dimension, alpha, tau, r);
}

double fit_decay_exponent(const RadialFunction& w, double r_start, double r_end) {
    validate_function(w);
    if (!(r_start > 0.0) || !(r_end > r_start))
        throw ValidationError("fit_decay_exponent: need 0 < r_start < r_end");

    std::vector<double> lx, ly;
    const auto& r = w.grid->nodes;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] < r_start || r[i] > r_end)
            continue;
        if (!(w.values[i] > 0.0))
            throw NonPositiveValuesError(
                "fit_decay_exponent: w(r=" + std::to_string(r[i]) +
                ") = " + std::to_string(w.values[i]) +
                "; a log-log fit needs positive values");
        lx.push_back(std::log(r[i]));
        ly.push_back(std::log(w.values[i]));
    }
    if (lx.size() < 10)
        throw ValidationError("fit_decay_exponent: only " +
                              std::to_string(lx.size()) +
                              " nodes in the fit window, need at least 10");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return sxy / sxx;
}

EnvelopeVerification verify_envelopes(const RadialFunction& f,
                                      const DecayProfile& omega, int dimension,
                                      double alpha, double tau, double r_start,
                                      double r_end) {
    EnvelopeVerification v;
    v.regime = classify_regime(tau, dimension, alpha);
    switch (v.regime) {
    case RegimeClass::TauAboveN:
        v.predicted_slope = alpha - dimension;
        break;
    case RegimeClass::TauEqualsN:
        v.predicted_slope = 0.0;
        break;
    case RegimeClass::TauBelowN:
        v.predicted_slope = alpha - tau;
        break;
    }

    const RadialFunction w = riesz_potential(f, f.grid, dimension, alpha);

    v.r_start = r_start > 0.0
                    ? r_start
                    : std::max(10.0, 2.0 * source_mass_radius(f, dimension));
    v.r_end = r_end > 0.0 ? r_end : f.grid->r_max();
    if (!(v.r_start >= 2.0) || !(v.r_end > v.r_start))
        throw ValidationError("verify_envelopes: bad fit window");

    EnvelopeReport& up = v.upper;
    const auto& nodes = f.grid->nodes;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i] < v.r_start || nodes[i] > v.r_end)
            continue;
        up.radii.push_back(nodes[i]);
        up.w_values.push_back(w.values[i]);
        up.bound_values.push_back(
            shape_value(v.regime, omega, dimension, alpha, tau, nodes[i]));
    }
    v.lower.radii = up.radii;
    v.lower.w_values = up.w_values;
    v.lower.bound_values = up.bound_values;

    double ratio_min = std::numeric_limits<double>::infinity();
    double ratio_max = 0.0;
    for (std::size_t i = 0; i < up.radii.size(); ++i) {
        const double ratio = up.w_values[i] / up.bound_values[i];
        ratio_min = std::min(ratio_min, ratio);
        ratio_max = std::max(ratio_max, ratio);
    }
    up.fitted_C = ratio_max;
    v.lower.fitted_C = ratio_min;

    const double slope = fit_decay_exponent(w, v.r_start, v.r_end);
    up.fitted_slope = slope;
    v.lower.fitted_slope = slope;

    bool asymptotics_ok;
    if (v.regime == RegimeClass::TauEqualsN) {
        // Two decades of radii cannot resolve a log through a slope, but the
        // ratio to the predicted shape must then be flat.
        asymptotics_ok = ratio_min > 0.0 && std::isfinite(ratio_max) &&
                         ratio_max <= kLogRegimeSpread * ratio_min;
    } else {
        asymptotics_ok = std::abs(slope - v.predicted_slope) <= kSlopeTol;
    }

    up.pass = asymptotics_ok && std::isfinite(up.fitted_C) && up.fitted_C > 0.0;
    v.lower.pass =
        asymptotics_ok && std::isfinite(v.lower.fitted_C) && v.lower.fitted_C > 0.0;
    return v;
}

} // namespace fraclap
