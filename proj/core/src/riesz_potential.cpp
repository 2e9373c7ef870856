#include "fraclap/riesz_potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "fraclap/angular.hpp"
#include "fraclap/errors.hpp"
#include "fraclap/quadrature.hpp"
#include "fraclap/special.hpp"

namespace fraclap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Integrand factor |S^{n-1}| s^{n-1} A_band(n, beta, r, s), with the
// distance to the diagonal supplied by the caller. Checking the angular
// factor for zero first keeps the product finite when s is so large that
// the polynomial prefactor alone would overflow.
double banded_kernel(int n, double beta, double r, double s, double sep,
                     double d_lo, double d_hi) {
    const double ang = angular_kernel_band_at(n, beta, r, s, sep, d_lo, d_hi);
    if (ang == 0.0)
        return 0.0;
    return sphere_measure(n) * std::pow(s, n - 1) * ang;
}

// Gauss-Legendre with interval bisection until the halved estimate agrees
// to rel; the halved sum is returned as the better of the two. Pieces whose
// value is below 1e-280 in magnitude stop refining, they cannot matter at
// double precision.
double adaptive_gl(const std::function<double(double)>& f, double a, double b,
                   double rel, int depth) {
    const double whole = integrate_gl(f, a, b);
    const double mid = 0.5 * (a + b);
    const double split = integrate_gl(f, a, mid) + integrate_gl(f, mid, b);
    if (std::abs(split - whole) <= rel * std::abs(split) ||
        std::abs(split) < 1e-280 || depth >= 24)
        return split;
    return adaptive_gl(f, a, mid, rel, depth + 1) +
           adaptive_gl(f, mid, b, rel, depth + 1);
}

// Breakpoints of the band-restricted integrand over s in (0, R): the band
// edges clip at |r - s| = d and at r + s = d. With d_lo = 0 this inserts r
// itself, marking the singular piece. Grid nodes are added by the caller.
void add_band_breakpoints(std::vector<double>& cuts, double r, double d_lo,
                          double d_hi, double r_max) {
    const double candidates[] = {r - d_lo, r + d_lo, d_lo - r,
                                 r - d_hi, r + d_hi, d_hi - r};
    for (double c : candidates)
        if (std::isfinite(c) && c > 0.0 && c < r_max)
            cuts.push_back(c);
}

// One term of the potential integrand on (0, R]: f is piecewise linear
// there, so within a piece it is a polynomial against the banded kernel.
struct PieceIntegrator {
    const RadialFunction& f;
    int n;
    double beta;
    double r;
    double d_lo;
    double d_hi;

    double integrand(double s, double sep) const {
        return f(s) * banded_kernel(n, beta, r, s, sep, d_lo, d_hi);
    }

    double piece(double a, double b) const {
        // Nodes are breakpoints, so [a, b] lies inside one cell and a
        // piecewise-linear f vanishing at both ends vanishes throughout.
        if (f(a) == 0.0 && f(b) == 0.0 && f(0.5 * (a + b)) == 0.0)
            return 0.0;
        if (d_lo == 0.0 && b == r)
            return tanh_sinh(
                [&](double x, double, double db) { return integrand(x, db); }, a, b);
        if (d_lo == 0.0 && a == r)
            return tanh_sinh(
                [&](double x, double da, double) { return integrand(x, da); }, a, b);
        return adaptive_gl(
            [&](double s) { return integrand(s, std::abs(s - r)); }, a, b, 1e-8, 0);
    }
};

// Band-restricted potential at radius r, without the Riesz normalization.
double band_integral(const RadialFunction& f, int n, double alpha, double r,
                     double d_lo, double d_hi) {
    const double beta = n - alpha;
    const double r_max = f.grid->r_max();

    std::vector<double> cuts;
    cuts.reserve(f.grid->nodes.size() + 8);
    for (double node : f.grid->nodes)
        if (node > 0.0 && node < r_max)
            cuts.push_back(node);
    add_band_breakpoints(cuts, r, d_lo, d_hi, r_max);
    std::sort(cuts.begin(), cuts.end());

    std::vector<double> edges;
    edges.reserve(cuts.size() + 2);
    edges.push_back(0.0);
    for (double c : cuts)
        if (c - edges.back() > 1e-14 * (1.0 + c))
            edges.push_back(c);
    edges.push_back(r_max);

    const PieceIntegrator pi{f, n, beta, r, d_lo, d_hi};
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k)
        total += pi.piece(edges[k], edges[k + 1]);

    // Far field: f ~ c s^{-q} beyond R. Substituting s = R/x turns the tail
    // into an integral over (0, 1] whose endpoint singularity x^{q-alpha-1}
    // is integrable exactly when q > alpha (checked by the caller). Band
    // clips land at x = R/(r + d) and friends; cutting there keeps each
    // sub-piece smooth in the interior.
    const double c_tail = f.tail_coefficient();
    if (c_tail != 0.0) {
        const double q = f.tail_power;
        std::vector<double> xs;
        xs.push_back(0.0);
        for (double t : {r + d_lo, r + d_hi, d_lo - r, d_hi - r})
            if (std::isfinite(t) && t > r_max)
                xs.push_back(r_max / t);
        xs.push_back(1.0);
        std::sort(xs.begin(), xs.end());

        for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
            if (xs[k + 1] - xs[k] <= 1e-15)
                continue;
            // Compose the separation s - r = (R - r x)/x from this piece's
            // own upper endpoint: with x = xb - db the numerator becomes
            // gap + r db, a sum of nonnegative terms (r <= R, xb <= 1), so
            // the distance stays exact even as x -> 1 with r at the
            // boundary, where forming R/x - r directly would cancel.
            const double xb = xs[k + 1];
            const double gap = r_max - r * xb;
            const auto tail_integrand = [&, xb, gap](double x, double, double db) {
                const double s = r_max / x;
                const double sep = (gap + r * db) / x;
                const double fk = c_tail * std::pow(s, -q) *
                                  banded_kernel(n, beta, r, s, sep, d_lo, d_hi);
                return fk * r_max / (x * x);
            };
            total += tanh_sinh(tail_integrand, xs[k], xs[k + 1]);
        }
    }
    return total;
}

void check_source(const RadialFunction& f, int n, double alpha) {
    validate_function(f);
    riesz_constant(n, alpha); // vets the (n, alpha) range
    if (f.limit_at_infinity != 0.0)
        throw NonzeroSourceLimitError(
            "riesz_potential: source must vanish at infinity, got limit " +
            std::to_string(f.limit_at_infinity));
    if (!(f.tail_power > alpha))
        throw NonIntegrableTailError(
            "riesz_potential: source tail r^-" + std::to_string(f.tail_power) +
            " is not integrable against the order-" + std::to_string(alpha) +
            " kernel; need tail_power > alpha");
}

} // namespace

Region region_split(double x_radius, double y_radius, double y_angle) {
    if (!(x_radius > 0.0) || !std::isfinite(x_radius))
        throw ValidationError("region_split: x_radius must be positive");
    if (!(y_radius >= 0.0) || !std::isfinite(y_radius) || !std::isfinite(y_angle))
        throw ValidationError("region_split: bad y coordinates");
    // Law of cosines, written so nearly-equal radii at small angles do not
    // cancel: |x - y|^2 = (x - y)^2 + 4 x y sin^2(angle/2).
    const double diff = x_radius - y_radius;
    const double sine = std::sin(0.5 * y_angle);
    const double dist =
        std::sqrt(diff * diff + 4.0 * x_radius * y_radius * sine * sine);
    if (dist <= 0.5 * x_radius)
        return Region::Inner;
    if (dist <= 2.0 * x_radius)
        return Region::Middle;
    return Region::Outer;
}

RadialFunction riesz_potential(const RadialFunction& f, const GridPtr& grid,
                               int dimension, double alpha) {
    check_source(f, dimension, alpha);
    require_same_grid(f, grid);

    const double gamma = riesz_constant(dimension, alpha);
    RadialFunction w;
    w.grid = f.grid;
    w.values.resize(f.values.size());
    for (std::size_t i = 0; i < f.values.size(); ++i)
        w.values[i] =
            gamma * band_integral(f, dimension, alpha, f.grid->nodes[i], 0.0, kInf);
    w.limit_at_infinity = 0.0;
    w.tail_power = std::min(static_cast<double>(dimension), f.tail_power) - alpha;
    return w;
}

PotentialSplit split_contributions(const RadialFunction& f, double x_radius,
                                   int dimension, double alpha) {
    check_source(f, dimension, alpha);
    if (!(x_radius > 0.0) || !(x_radius <= f.grid->r_max()))
        throw ValidationError(
            "split_contributions: evaluation radius must lie in (0, r_max]");

    const double gamma = riesz_constant(dimension, alpha);
    const double half = 0.5 * x_radius;
    const double twice = 2.0 * x_radius;
    PotentialSplit out;
    out.inner = gamma * band_integral(f, dimension, alpha, x_radius, 0.0, half);
    out.middle = gamma * band_integral(f, dimension, alpha, x_radius, half, twice);
    out.outer = gamma * band_integral(f, dimension, alpha, x_radius, twice, kInf);
    return out;
}

} // namespace fraclap
