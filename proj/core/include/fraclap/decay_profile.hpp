#ifndef FRACLAP_DECAY_PROFILE_HPP
#define FRACLAP_DECAY_PROFILE_HPP

#include <cstddef>
#include <optional>
#include <vector>

namespace fraclap {

enum class ProfileKind { Power, LogPower, Table };

// Radial weight omega: positive, non-increasing, defined on [0, inf). Three
// families:
//
//   Power     omega(r) = A * max(r, floor)^{-eps}
//   LogPower  omega(r) = A * (1 + ln(max(r, floor)))^{-q}
//   Table     user samples, log-log linear between knots, constant below the
//             first knot, fitted power/log tail beyond the last.
//
// The convergence gate is the integral D = integral_1^inf omega(r)/r dr.
// Power converges iff eps > 0 (D = A/eps for floor <= 1), LogPower iff q > 1
// (D = A (1 + ln floor)^{1-q}/(q-1) for floor in (1/e, 1], so A/(q-1) at the
// default floor 1). Table profiles are classified by fitting both closed
// forms to the last decade of knots and keeping the better fit.
class DecayProfile {
public:
    static DecayProfile power(double epsilon, double amplitude = 1.0,
                              double domain_floor = 1.0);
    static DecayProfile log_power(double q, double amplitude = 1.0,
                                  double domain_floor = 1.0);
    static DecayProfile table(std::vector<double> radii, std::vector<double> values);

    double operator()(double r) const;

    ProfileKind kind() const { return kind_; }
    double parameter() const { return param_; }
    double amplitude() const { return amplitude_; }
    double domain_floor() const { return floor_; }

    // Same profile scaled by c > 0.
    DecayProfile scaled(double c) const;

    // Value of the convergence integral, empty when it diverges. Computed at
    // construction: adaptive-range quadrature on [1, R] plus the analytic
    // tail of the (fitted) model, with R doubled until two successive
    // answers agree to 1e-8 relative.
    const std::optional<double>& dini_value() const { return dini_; }

    // Fitted far-field model for Table profiles (for the closed-form
    // families this mirrors the family itself).
    struct TailModel {
        bool log_type = false; // false: ~ r^{-exponent}; true: ~ (1+ln r)^{-exponent}
        double exponent = 0.0;
    };
    const TailModel& tail_model() const { return tail_; }

    const std::vector<double>& knot_radii() const { return table_r_; }
    const std::vector<double>& knot_values() const { return table_w_; }

private:
    DecayProfile() = default;
    void classify_and_integrate();

    ProfileKind kind_ = ProfileKind::Power;
    double param_ = 1.0;
    double amplitude_ = 1.0;
    double floor_ = 1.0;
    std::vector<double> table_r_, table_w_; // Table kind only
    std::vector<double> log_r_, log_w_;     // cached logs for interpolation
    TailModel tail_;
    std::optional<double> dini_;
};

struct ProfileReport {
    bool monotone = true;
    bool positive = true;
    bool dini_finite = false;
    double dini_value = 0.0;
    // Indices into the sampling grid (or table knots) where a violation was
    // seen; empty when the profile is clean.
    std::vector<std::size_t> offending_samples;
};

// Value of the convergence integral; throws DiniDivergentError /
// NonMonotoneError instead of reporting.
double dini_integral(const DecayProfile& profile);

// Non-throwing variant: samples the profile on a geometric grid of at least
// 200 points (plus every table knot) and reports monotonicity, positivity
// and the convergence status.
ProfileReport validate_profile(const DecayProfile& profile);

// theta * omega(r) * (1 + r)^{-tau}; requires theta >= 0 and r >= 0.
double envelope(double theta, double tau, const DecayProfile& profile, double r);

} // namespace fraclap

#endif
