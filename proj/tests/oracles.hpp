#ifndef FRACLAP_TEST_ORACLES_HPP
#define FRACLAP_TEST_ORACLES_HPP

// Reference numerics for the test suite, written against the library rather
// than with it: everything here runs in long double through its own
// quadrature code, so agreement with the library is evidence and not
// tautology.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

inline constexpr long double kPi = 3.141592653589793238462643383279503L;

// Double-exponential rule on [a, b]. The callback receives the node and the
// exact distances to both endpoints so integrands singular at an endpoint
// never subtract nearly equal numbers. Smaller step than the library's rule;
// long double keeps the extra resolution meaningful.
inline long double tanh_sinh(
    const std::function<long double(long double, long double, long double)>& f,
    long double a, long double b) {
    const long double half = 0.5L * (b - a);
    const long double h = 0.05L;
    long double sum = 0.0L;
    const int kmax = static_cast<int>(7.0L / h);
    for (int k = -kmax; k <= kmax; ++k) {
        const long double t = k * h;
        const long double y = 0.5L * kPi * std::sinh(t);
        if (std::fabs(y) > 5600.0L)
            continue;
        const long double e2y = std::exp(2.0L * y);
        const long double da = 2.0L * half / (1.0L + 1.0L / e2y);
        const long double db = 2.0L * half / (1.0L + e2y);
        if (da == 0.0L || db == 0.0L)
            continue;
        const long double x = (da <= db) ? a + da : b - db;
        const long double sech = 1.0L / std::cosh(y);
        const long double w = half * 0.5L * kPi * std::cosh(t) * sech * sech;
        const long double v = f(x, da, db);
        if (!std::isfinite(static_cast<double>(v)) && std::fmin(da, db) < 1e-800L)
            continue;
        sum += w * v;
    }
    return h * sum;
}

inline long double tanh_sinh(const std::function<long double(long double)>& f,
                             long double a, long double b) {
    return tanh_sinh(
        [&](long double x, long double, long double) { return f(x); }, a, b);
}

// Gauss-Legendre nodes by Newton iteration in long double, cached per order.
struct GaussRule {
    std::vector<long double> x, w;
};

inline const GaussRule& gauss(int n) {
    static GaussRule rule;
    if (static_cast<int>(rule.x.size()) != n) {
        rule.x.assign(n, 0.0L);
        rule.w.assign(n, 0.0L);
        for (int i = 0; i < n; ++i) {
            long double x = std::cos(kPi * (i + 0.75L) / (n + 0.5L));
            long double dp = 0.0L;
            for (int it = 0; it < 200; ++it) {
                long double p0 = 1.0L, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const long double p2 =
                        ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0L);
                const long double dx = p1 / dp;
                x -= dx;
                if (std::fabs(dx) < 1e-19L)
                    break;
            }
            rule.x[i] = x;
            rule.w[i] = 2.0L / ((1.0L - x * x) * dp * dp);
        }
    }
    return rule;
}

inline long double gl(const std::function<long double(long double)>& f,
                      long double a, long double b, int order = 24) {
    const GaussRule& rule = gauss(order);
    const long double c = 0.5L * (a + b), h = 0.5L * (b - a);
    long double sum = 0.0L;
    for (std::size_t i = 0; i < rule.x.size(); ++i)
        sum += rule.w[i] * f(c + h * rule.x[i]);
    return h * sum;
}

inline long double gl_panels(const std::function<long double(long double)>& f,
                             long double a, long double b, int panels,
                             int order = 24) {
    long double sum = 0.0L;
    for (int k = 0; k < panels; ++k) {
        const long double lo = a + (b - a) * k / panels;
        const long double hi = a + (b - a) * (k + 1) / panels;
        sum += gl(f, lo, hi, order);
    }
    return sum;
}

inline long double sphere_measure(int n) {
    return 2.0L * std::exp(0.5L * n * std::log(kPi) - std::lgamma(0.5L * (long double)n));
}

// Riesz normalization gamma(n, alpha) recomputed from the Gamma-function
// formula in long double.
inline long double riesz_gamma(int n, long double alpha) {
    return std::exp(std::lgamma(0.5L * (n - alpha)) - alpha * std::log(2.0L) -
                    0.5L * n * std::log(kPi) - std::lgamma(0.5L * alpha));
}

// Eigenvalue of the closed-form pair: I_alpha maps (1+s^2)^{-(n+alpha)/2} to
// lambda (1+r^2)^{-(n-alpha)/2}.
inline long double pair_eigenvalue(int n, long double alpha) {
    return std::exp(std::lgamma(0.5L * (n - alpha)) - std::lgamma(0.5L * (n + alpha)) -
                    alpha * std::log(2.0L));
}

// Spherical mean of |r e1 - s theta|^{-beta} over theta in S^{n-1}, by
// quadrature in the polar angle. Only safe away from the diagonal r = s
// (the acceptance tests never need the diagonal).
inline long double sphere_mean(int n, long double beta, long double r,
                               long double s, int panels = 64) {
    if (n == 1) {
        return 0.5L * (std::pow(std::fabs(r - s), -beta) + std::pow(r + s, -beta));
    }
    const auto num = [&](long double phi) {
        const long double c = std::cos(phi);
        const long double v = r * r + s * s - 2.0L * r * s * c;
        return std::pow(v, -0.5L * beta) * std::pow(std::sin(phi), (long double)(n - 2));
    };
    const auto den = [&](long double phi) {
        return std::pow(std::sin(phi), (long double)(n - 2));
    };
    // When the radii nearly coincide the numerator concentrates in a layer
    // of width ~ |r-s|/sqrt(rs) at phi = 0, which uniform panels miss. Grade
    // dyadically toward zero: 64 halvings reach the long double resolution
    // limit, so every separation a test can express is resolved.
    long double acc = gl_panels(num, 0.5L * kPi, kPi, std::max(4, panels / 2));
    long double hi = 0.5L * kPi;
    for (int j = 0; j < 64; ++j) {
        const long double lo = 0.5L * hi;
        acc += gl(num, lo, hi, 24);
        hi = lo;
    }
    acc += gl(num, 0.0L, hi, 24);
    return acc / gl_panels(den, 0.0L, kPi, panels);
}

// Nested-quadrature potential of the closed-form source at the origin:
//
//   w(0) = gamma |S^{n-1}| integral_0^inf (1+s^2)^{-(n+alpha)/2} s^{n-1}
//            M(0, s) ds,
//
// with the angular mean M evaluated by the polar quadrature above even
// though it is constant at r = 0, so the whole pipeline is exercised. The
// radial axis is split at 1 and inverted beyond it.
inline long double w0_closed_form(int n, long double alpha) {
    const long double beta = n - alpha;
    const auto radial = [&](long double s) {
        const long double f = std::exp(-0.5L * (n + alpha) * std::log1p(s * s));
        return f * std::pow(s, (long double)(n - 1)) * sphere_mean(n, beta, 0.0L, s, 8);
    };
    const long double inner = tanh_sinh(
        [&](long double x, long double da, long double) {
            // s^{alpha-1} is singular at the left endpoint for alpha < 1;
            // the reconstructed distance keeps it accurate.
            return radial(x == 0.0L ? da : x);
        },
        0.0L, 1.0L);
    const long double outer = tanh_sinh(
        [&](long double t, long double da, long double) {
            const long double tt = (t == 0.0L) ? da : t;
            return radial(1.0L / tt) / (tt * tt);
        },
        0.0L, 1.0L);
    return riesz_gamma(n, alpha) * sphere_measure(n) * (inner + outer);
}

// Least-squares slope of log y against log x, long double accumulation.
inline long double log_log_slope(const std::vector<long double>& xs,
                                 const std::vector<long double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("log_log_slope: need matched samples");
    long double sx = 0.0L, sy = 0.0L, sxx = 0.0L, sxy = 0.0L;
    const long double m = static_cast<long double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const long double lx = std::log(xs[i]);
        const long double ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

} // namespace oracle

#endif
