#include "fraclap/decay_profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fraclap/errors.hpp"
#include "fraclap/quadrature.hpp"

namespace fraclap {

namespace {

constexpr double kDivergenceEps = 1e-3; // fitted power exponent below this: divergent
constexpr double kFitTol = 1e-8;        // doubling agreement for the integral

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0; // mean squared residual
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    LineFit fit;
    const double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - (fit.intercept + fit.slope * x[i]);
        fit.residual += e * e;
    }
    fit.residual /= n;
    return fit;
}

} // namespace

DecayProfile DecayProfile::power(double epsilon, double amplitude, double domain_floor) {
    if (epsilon < 0.0)
        throw NonMonotoneError("power profile needs epsilon >= 0 to be non-increasing");
    if (!(amplitude > 0.0))
        throw ValidationError("profile amplitude must be positive");
    if (!(domain_floor > 0.0))
        throw ValidationError("domain_floor must be positive");
    DecayProfile p;
    p.kind_ = ProfileKind::Power;
    p.param_ = epsilon;
    p.amplitude_ = amplitude;
    p.floor_ = domain_floor;
    p.tail_ = {false, epsilon};
    p.classify_and_integrate();
    return p;
}

DecayProfile DecayProfile::log_power(double q, double amplitude, double domain_floor) {
    if (q < 0.0)
        throw NonMonotoneError("log_power profile needs q >= 0 to be non-increasing");
    if (!(amplitude > 0.0))
        throw ValidationError("profile amplitude must be positive");
    if (!(1.0 + std::log(domain_floor) > 0.0))
        throw ValidationError("log_power domain_floor must exceed 1/e");
    DecayProfile p;
    p.kind_ = ProfileKind::LogPower;
    p.param_ = q;
    p.amplitude_ = amplitude;
    p.floor_ = domain_floor;
    p.tail_ = {true, q};
    p.classify_and_integrate();
    return p;
}

DecayProfile DecayProfile::table(std::vector<double> radii, std::vector<double> values) {
    if (radii.size() != values.size() || radii.size() < 4)
        throw ValidationError("table profile needs at least 4 matching knots");
    for (std::size_t i = 0; i + 1 < radii.size(); ++i)
        if (!(radii[i] < radii[i + 1]))
            throw ValidationError("table radii must be strictly increasing");
    if (!(radii.front() > 0.0))
        throw ValidationError("table radii must be positive");
    bool all_positive = true;
    for (double v : values)
        if (!(v > 0.0))
            all_positive = false;

    DecayProfile p;
    p.kind_ = ProfileKind::Table;
    p.amplitude_ = 1.0;
    p.floor_ = radii.front();
    p.table_r_ = std::move(radii);
    p.table_w_ = std::move(values);
    if (all_positive) {
        p.log_r_.resize(p.table_r_.size());
        p.log_w_.resize(p.table_w_.size());
        for (std::size_t i = 0; i < p.table_r_.size(); ++i) {
            p.log_r_[i] = std::log(p.table_r_[i]);
            p.log_w_[i] = std::log(p.table_w_[i]);
        }
        // Fit the last decade of knots with both closed-form families and
        // keep the better one as the far-field model.
        const double r_hi = p.table_r_.back();
        const double r_lo = std::max(r_hi / 10.0, 1.0);
        std::vector<double> lx_pow, lx_log, ly;
        for (std::size_t i = 0; i < p.table_r_.size(); ++i) {
            if (p.table_r_[i] < r_lo)
                continue;
            lx_pow.push_back(p.log_r_[i]);
            lx_log.push_back(std::log(1.0 + p.log_r_[i]));
            ly.push_back(p.log_w_[i]);
        }
        if (lx_pow.size() >= 4) {
            const LineFit fp = fit_line(lx_pow, ly);
            const LineFit fl = fit_line(lx_log, ly);
            if (fl.residual < fp.residual)
                p.tail_ = {true, -fl.slope};
            else
                p.tail_ = {false, -fp.slope};
        } else {
            // Too few knots past r = 1 for a decade fit; extrapolate with the
            // last segment's power-law slope.
            const std::size_t n = p.table_r_.size();
            const double slope = (p.log_w_[n - 1] - p.log_w_[n - 2]) /
                                 (p.log_r_[n - 1] - p.log_r_[n - 2]);
            p.tail_ = {false, -slope};
        }
        p.classify_and_integrate();
    } else {
        p.tail_ = {false, 1.0};
        // dini_ stays empty; validate_profile reports the sign problem and
        // dini_integral refuses with NonMonotone/positivity context.
    }
    return p;
}

double DecayProfile::operator()(double r) const {
    switch (kind_) {
    case ProfileKind::Power:
        return amplitude_ * std::pow(std::max(r, floor_), -param_);
    case ProfileKind::LogPower:
        return amplitude_ * std::pow(1.0 + std::log(std::max(r, floor_)), -param_);
    case ProfileKind::Table: {
        if (r <= table_r_.front())
            return amplitude_ * table_w_.front();
        if (r >= table_r_.back()) {
            const double wb = amplitude_ * table_w_.back();
            const double rb = table_r_.back();
            if (tail_.log_type)
                return wb * std::pow((1.0 + std::log(r)) / (1.0 + std::log(rb)),
                                     -tail_.exponent);
            return wb * std::pow(r / rb, -tail_.exponent);
        }
        auto it = std::upper_bound(table_r_.begin(), table_r_.end(), r);
        const std::size_t k = static_cast<std::size_t>(it - table_r_.begin()) - 1;
        if (!log_r_.empty()) {
            const double t = (std::log(r) - log_r_[k]) / (log_r_[k + 1] - log_r_[k]);
            return amplitude_ * std::exp(log_w_[k] + t * (log_w_[k + 1] - log_w_[k]));
        }
        const double t = (r - table_r_[k]) / (table_r_[k + 1] - table_r_[k]);
        return amplitude_ * (table_w_[k] + t * (table_w_[k + 1] - table_w_[k]));
    }
    }
    return 0.0;
}

DecayProfile DecayProfile::scaled(double c) const {
    if (!(c > 0.0))
        throw ValidationError("profile scale factor must be positive");
    DecayProfile p = *this;
    p.amplitude_ *= c;
    if (p.dini_)
        p.dini_ = *p.dini_ * c;
    return p;
}

void DecayProfile::classify_and_integrate() {
    // Divergence is decided from the (fitted) tail model, matching the two
    // closed forms: a power tail needs exponent > 0, a log tail needs
    // exponent > 1.
    const double margin = kind_ == ProfileKind::Table ? kDivergenceEps : 0.0;
    if (tail_.log_type ? (tail_.exponent <= 1.0 + margin) : (tail_.exponent <= margin)) {
        dini_.reset();
        return;
    }

    auto integrand = [this](double r) { return (*this)(r) / r; };
    auto tail_mass = [this](double R) {
        const double wR = (*this)(R);
        if (tail_.log_type)
            return wR * (1.0 + std::log(R)) / (tail_.exponent - 1.0);
        return wR / tail_.exponent;
    };

    double R = 1e4;
    double prev = integrate_log_panels(integrand, 1.0, R) + tail_mass(R);
    for (int it = 0; it < 24; ++it) {
        R *= 2.0;
        const double cur = integrate_log_panels(integrand, 1.0, R) + tail_mass(R);
        if (std::fabs(cur - prev) <= kFitTol * std::max(std::fabs(cur), 1e-300)) {
            dini_ = cur;
            return;
        }
        prev = cur;
    }
    // The doubling loop not settling means the tail model misrepresents the
    // data badly enough that the integral cannot be trusted.
    dini_.reset();
}

double dini_integral(const DecayProfile& profile) {
    const ProfileReport report = validate_profile(profile);
    if (!report.monotone)
        throw NonMonotoneError("profile is not non-increasing");
    if (!report.positive)
        throw NonMonotoneError("profile is not strictly positive");
    if (!profile.dini_value())
        throw DiniDivergentError("profile fails the convergence gate: "
                                 "integral_1^inf omega(r)/r dr diverges");
    return *profile.dini_value();
}

ProfileReport validate_profile(const DecayProfile& profile) {
    ProfileReport report;

    // Geometric sampling grid over a wide range, plus the table knots so
    // that knot-level violations cannot hide between samples.
    std::vector<double> samples;
    const int count = 240;
    const double lo = 1e-3, hi = 1e7;
    const double step = std::pow(hi / lo, 1.0 / (count - 1));
    double r = lo;
    for (int i = 0; i < count; ++i, r *= step)
        samples.push_back(r);
    for (double knot : profile.knot_radii())
        samples.push_back(knot);
    std::sort(samples.begin(), samples.end());

    double prev = profile(samples.front());
    if (!(prev > 0.0))
        report.positive = false;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const double v = profile(samples[i]);
        if (!(v > 0.0)) {
            report.positive = false;
            report.offending_samples.push_back(i);
        } else if (v > prev * (1.0 + 1e-12)) {
            report.monotone = false;
            report.offending_samples.push_back(i);
        }
        prev = v;
    }

    if (report.monotone && report.positive && profile.dini_value()) {
        report.dini_finite = true;
        report.dini_value = *profile.dini_value();
    }
    return report;
}

double envelope(double theta, double tau, const DecayProfile& profile, double r) {
    if (theta < 0.0)
        throw ValidationError("envelope needs theta >= 0");
    if (r < 0.0)
        throw ValidationError("envelope needs r >= 0");
    return theta * profile(r) * std::pow(1.0 + r, -tau);
}

} // namespace fraclap
