#include "fraclap/angular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fraclap/errors.hpp"
#include "fraclap/quadrature.hpp"
#include "fraclap/special.hpp"

namespace fraclap {

namespace {

constexpr double kPi = 3.14159265358979323846;

[[noreturn]] void throw_singular(int n, double beta, double r) {
    throw SingularDiagonalError("angular mean of d^{-beta} diverges at r = s = " +
                                std::to_string(r) + " for beta = " + std::to_string(beta) +
                                " in dimension " + std::to_string(n));
}

void validate_args(int n, double beta, double r, double s, double sep, double d_lo,
                   double d_hi) {
    if (n < 1) {
        throw BadOrderError("angular kernel: dimension must be >= 1, got " +
                            std::to_string(n));
    }
    if (!std::isfinite(beta)) {
        throw ValidationError("angular kernel: beta must be finite");
    }
    if (!std::isfinite(r) || !std::isfinite(s) || r < 0.0 || s < 0.0) {
        throw ValidationError("angular kernel: radii must be finite and nonnegative");
    }
    if (!(sep >= 0.0) || !std::isfinite(sep)) {
        throw ValidationError("angular kernel: separation must be finite and nonnegative");
    }
    if (!(d_lo >= 0.0) || !(d_hi >= d_lo)) {
        throw ValidationError("angular kernel: need 0 <= d_lo <= d_hi");
    }
}

double band_n1(double beta, double r, double s, double sep, double d_lo, double d_hi) {
    double total = 0.0;
    for (const double d : {sep, r + s}) {
        if (d < d_lo || d >= d_hi) {
            continue;
        }
        if (d == 0.0 && beta > 0.0) {
            throw_singular(1, beta, r);
        }
        total += 0.5 * std::pow(d, -beta);
    }
    return total;
}

// The mean over a squared-distance band [v_lo, v_hi] in dimension three is
// (F(v_hi) - F(v_lo)) / (4 r s) with F the antiderivative of v^{-beta/2}.
// The difference is evaluated through expm1/log1p so it keeps full precision
// both when the band is razor-thin and when the two ends differ by hundreds
// of orders of magnitude (far field: v_hi/v_lo -> 1; near diagonal: v_lo
// smaller than v_hi by a factor ~ (separation/r)^2).
double band_n3(double beta, double r, double s, double sep, double d_lo, double d_hi) {
    const double v_min = sep * sep;
    const double v_max_gap = 4.0 * r * s; // (r+s)^2 - (r-s)^2, exactly
    double v_lo = v_min;
    double gap = v_max_gap; // v_hi - v_lo for the current clip
    if (d_lo * d_lo > v_lo) {
        v_lo = d_lo * d_lo;
        gap = (v_min + v_max_gap) - v_lo;
    }
    const double v_hi_full = v_min + v_max_gap;
    if (d_hi * d_hi < v_hi_full) {
        gap = d_hi * d_hi - v_lo;
    }
    if (!(gap > 0.0)) {
        return 0.0;
    }
    const double rs4 = 4.0 * r * s;
    if (v_lo == 0.0) {
        if (beta >= 2.0) {
            if (sep > 0.0 || d_lo > 0.0) {
                // The squared lower distance underflowed while the true
                // separation is positive, so the band mean is finite but
                // beyond double range. Quadrature weights die off much
                // faster than the kernel grows at such distances and the
                // caller drops non-finite values there, so overflow is the
                // honest answer rather than a divergence report.
                return std::numeric_limits<double>::infinity();
            }
            throw_singular(3, beta, r);
        }
        const double e = 1.0 - 0.5 * beta;
        return std::pow(gap, e) / (e * rs4);
    }
    const double log_ratio = std::log1p(gap / v_lo);
    if (beta == 2.0) {
        return log_ratio / rs4;
    }
    const double e = 1.0 - 0.5 * beta;
    // F(v_hi) - F(v_lo) = v_lo^e * expm1(e * log(v_hi / v_lo)) / e.
    // For e < 0 (steep kernels) v_lo^e can overflow double range when the
    // separation is extremely small; the expm1 factor is then -1 + tiny, so
    // the product is computed with the power last to keep the headroom.
    return std::expm1(e * log_ratio) * std::pow(v_lo, e) / (e * rs4);
}

// Remaining dimensions: polar quadrature in the angle between the two
// directions. The squared distance is sep^2 + 4 r s sin^2(p/2), which stays
// accurate for nearly equal radii where the law-of-cosines form cancels.
double band_polar(int n, double beta, double r, double s, double sep, double d_lo,
                  double d_hi) {
    const double v_min = sep * sep;
    const double rs = r * s;
    const double v_hi_full = v_min + 4.0 * rs;
    const double v_lo = std::max(v_min, d_lo * d_lo);
    const double v_hi = std::min(v_hi_full, d_hi * d_hi);
    if (!(v_lo < v_hi)) {
        return 0.0;
    }
    if (v_lo == 0.0 && beta >= static_cast<double>(n - 1)) {
        if (sep > 0.0 || d_lo > 0.0) {
            // Same underflow escape as the closed-form three-dimensional
            // branch: a positive separation whose square rounds to zero
            // means a huge finite mean, not a divergent one.
            return std::numeric_limits<double>::infinity();
        }
        throw_singular(n, beta, r);
    }

    const auto angle_of = [&](double v) {
        const double ratio = std::sqrt(std::clamp((v - v_min) / (4.0 * rs), 0.0, 1.0));
        return 2.0 * std::asin(ratio);
    };
    const double p_lo = (v_lo == v_min) ? 0.0 : angle_of(v_lo);
    const double p_hi = (v_hi == v_hi_full) ? kPi : angle_of(v_hi);
    if (!(p_lo < p_hi)) {
        return 0.0;
    }

    const double weight = sphere_measure(n - 1) / sphere_measure(n);
    const auto integrand = [&](double p, double from_lo, double /*from_hi*/) {
        // Near the lower endpoint the angle is reconstructed from the offset
        // so sin^2(p/2) keeps full precision for tiny angles.
        const double angle = (p_lo == 0.0) ? from_lo : p;
        const double half = std::sin(0.5 * angle);
        const double v = v_min + 4.0 * rs * half * half;
        const double sp = std::sin(angle);
        const double power = std::pow(v, -0.5 * beta);
        if (std::isfinite(power)) {
            return std::pow(sp, n - 2) * power;
        }
        if (v == 0.0) {
            return power; // squared distance underflowed; caller drops it
        }
        // The power alone overflows while the sin^{n-2} factor restores a
        // representable product (tiny angles, steep kernels). Recombine in
        // log space; sp > 0 on the open interval.
        return std::exp((n - 2) * std::log(sp) - 0.5 * beta * std::log(v));
    };
    return weight * tanh_sinh(integrand, p_lo, p_hi);
}

} // namespace

double angular_kernel_band_at(int dimension, double beta, double r, double s,
                              double separation, double d_lo, double d_hi) {
    validate_args(dimension, beta, r, s, separation, d_lo, d_hi);

    if (r == 0.0 || s == 0.0) {
        const double d = std::max(r, s);
        if (d < d_lo || d >= d_hi) {
            return 0.0;
        }
        if (d == 0.0 && beta > 0.0) {
            throw_singular(dimension, beta, r);
        }
        return std::pow(d, -beta);
    }

    switch (dimension) {
    case 1:
        return band_n1(beta, r, s, separation, d_lo, d_hi);
    case 3:
        return band_n3(beta, r, s, separation, d_lo, d_hi);
    default:
        return band_polar(dimension, beta, r, s, separation, d_lo, d_hi);
    }
}

double angular_kernel_band(int dimension, double beta, double r, double s, double d_lo,
                           double d_hi) {
    return angular_kernel_band_at(dimension, beta, r, s, std::abs(r - s), d_lo, d_hi);
}

double angular_kernel(int dimension, double beta, double r, double s) {
    return angular_kernel_band(dimension, beta, r, s, 0.0,
                               std::numeric_limits<double>::infinity());
}

} // namespace fraclap
