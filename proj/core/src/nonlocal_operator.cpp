#include "fraclap/nonlocal_operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "fraclap/angular.hpp"
#include "fraclap/errors.hpp"
#include "fraclap/quadrature.hpp"
#include "fraclap/special.hpp"

namespace fraclap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Kernel of the radial reduction, |S^{n-1}| s^{n-1} A(n, beta, r, s), with
// the distance |r - s| supplied by the caller so near-diagonal evaluations
// don't lose it to rounding. The angular factor goes first: once it
// underflows to zero the polynomial prefactor is irrelevant, and for large
// n and s that prefactor can overflow on its own while the product cannot.
double reduced_kernel(int n, double beta, double r, double s, double sep) {
    const double ang = angular_kernel_band_at(n, beta, r, s, sep, 0.0, kInf);
    if (ang == 0.0)
        return 0.0;
    return sphere_measure(n) * std::pow(s, n - 1) * ang;
}

struct RowTail {
    double boundary_weight = 0.0; // couples u_i - u_N through the decaying part
    double mass_weight = 0.0;     // couples u_i - limit through the constant part
};

// Integrals of the kernel over (R, infinity) after the substitution s = R/x,
// which maps the tail onto x in (0, 1] and turns the integrable infinity
// into an x^{alpha-1} endpoint that tanh-sinh absorbs.
RowTail tail_weights(int n, double beta, double r, double r_max, double q) {
    const auto kernel_at = [&](double x) {
        const double s = r_max / x;
        return reduced_kernel(n, beta, r, s, s - r) * r_max / (x * x);
    };
    const double total = tanh_sinh(
        [&](double x, double, double) { return kernel_at(x); }, 0.0, 1.0);
    const double decaying = tanh_sinh(
        [&](double x, double, double) { return std::pow(x, q) * kernel_at(x); },
        0.0, 1.0);
    RowTail t;
    t.boundary_weight = std::max(decaying, 0.0);
    // x^q < 1 on (0, 1), so the difference is positive up to roundoff.
    t.mass_weight = std::max(total - decaying, 0.0);
    return t;
}

} // namespace

NonlocalOperator assemble_flap_matrix(const GridPtr& grid, int dimension, double alpha) {
    if (!grid)
        throw ValidationError("assemble_flap_matrix: null grid");
    validate_grid(*grid);
    const double scale = flap_constant(dimension, alpha); // also vets n and alpha
    const int n = dimension;
    const double beta = n + alpha;

    const auto& r = grid->nodes;
    const std::size_t last = r.size() - 1; // boundary node index N
    const double r_max = r[last];
    const double q = grid->tail_exponent_hint;

    NonlocalOperator op;
    op.grid = grid;
    op.dimension_n = n;
    op.order_alpha = alpha;
    op.tail_power = q;
    op.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(r.size()),
                                      static_cast<Eigen::Index>(r.size()));
    op.tail_row_correction = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(r.size()));

    auto& M = op.matrix;
    const auto couple = [&](std::size_t i, std::size_t j, double w) {
        M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += w;
        M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -= w;
    };

    // Per-row overshoot of the drift correction beyond its nonnegativity cap,
    // in weight units; compared against the row's coupling mass at the end.
    std::vector<double> drift_excess(r.size(), 0.0);

    for (std::size_t i = 0; i < last; ++i) {
        const double ri = r[i];

        if (i == 0) {
            // At the origin a radial function is even in the 1-D variable, so
            // the interpolant through (0, r_1) is u_0 + (u_1 - u_0) s^2/r_1^2
            // and the cell integral of s^2 * |S^{n-1}| s^{-1-alpha} is exact.
            const double w1 =
                sphere_measure(n) * std::pow(r[1], -alpha) / (2.0 - alpha);
            couple(0, 1, w1);
        } else {
            const double h_lo = ri - r[i - 1];
            const double h_hi = r[i + 1] - ri;
            const double h = std::min(h_lo, h_hi);

            const auto kernel_up = [&](double t) {
                return reduced_kernel(n, beta, ri, ri + t, t);
            };
            const auto kernel_down = [&](double t) {
                return reduced_kernel(n, beta, ri, std::max(ri - t, 0.0), t);
            };

            // Even and odd kernel moments over the symmetric window
            // [ri - h, ri + h]. The even moment weights the second difference
            // of the three-point interpolant; the odd moment is the drift of
            // the kernel's smooth prefactor across the window. Both
            // integrands behave like t^{1-alpha} at the diagonal, and the
            // distance t arrives exact as the tanh-sinh endpoint gap.
            // The kernel value can overflow at offsets far below any grid
            // scale (the angular mean peaks like t^{-beta} even though the
            // moment integrands stay integrable). Such nodes carry window
            // mass beneath double precision, so drop them instead of letting
            // an infinity poison the even sum or the odd difference.
            const auto window_pair = [&](double t, double& up, double& down) {
                up = kernel_up(t);
                down = kernel_down(t);
                return std::isfinite(up) && std::isfinite(down);
            };
            const double even2 = tanh_sinh(
                [&](double, double da, double) {
                    double up, down;
                    if (!window_pair(da, up, down))
                        return 0.0;
                    return 0.5 * da * da * (up + down);
                },
                0.0, h);
            const double odd1 = tanh_sinh(
                [&](double, double da, double) {
                    double up, down;
                    if (!window_pair(da, up, down))
                        return 0.0;
                    return 0.5 * da * (up - down);
                },
                0.0, h);

            // Largest drift magnitude for which both window weights stay
            // nonnegative. Exceeding it is routine near the origin where the
            // prefactor varies fast; the weights are capped and the overshoot
            // recorded, and only a large overshoot fails the assembly below.
            const double cap = even2 / std::max(h_lo, h_hi);
            double odd_used = std::clamp(odd1, -cap, cap);
            if (std::abs(odd1) > cap) {
                ++op.drift_capped_rows;
                const double over = std::abs(odd1) - cap;
                drift_excess[i] = 2.0 * over * (h_lo * h_lo + h_hi * h_hi) /
                                  (h_lo * h_hi * (h_lo + h_hi));
            }

            const double denom = h_lo + h_hi;
            const double w_down =
                std::max(2.0 * (even2 - h_hi * odd_used) / (h_lo * denom), 0.0);
            const double w_up =
                std::max(2.0 * (even2 + h_lo * odd_used) / (h_hi * denom), 0.0);
            couple(i, i - 1, w_down);
            couple(i, i + 1, w_up);

            // The window is symmetric but the cells are not; the leftover
            // slice on the wider side is regular (distance >= h) and is
            // integrated against the piecewise-linear hat of the far node.
            // Extending the quadratic instead would put negative weight on
            // the near node.
            if (h_hi > h) {
                const double w_rem = integrate_gl(
                    [&](double t) { return (t / h_hi) * kernel_up(t); }, h, h_hi);
                couple(i, i + 1, w_rem);
            }
            if (h_lo > h) {
                const double w_rem = integrate_gl(
                    [&](double t) { return (t / h_lo) * kernel_down(t); }, h, h_lo);
                couple(i, i - 1, w_rem);
            }
        }

        // Remaining cells: piecewise-linear u against the kernel, one Gauss
        // pass per cell feeding both hat functions. Positive integrand and
        // positive quadrature weights keep every coupling nonnegative no
        // matter how coarse the cell.
        const std::size_t skip_lo = (i == 0) ? 0 : i - 1;
        const auto& rule = gauss_rule(16);
        for (std::size_t j = 0; j < last; ++j) {
            if (j == skip_lo || j == i)
                continue;
            const double a = r[j];
            const double b = r[j + 1];
            const double mid = 0.5 * (a + b);
            const double half = 0.5 * (b - a);
            double w_left = 0.0;
            double w_right = 0.0;
            for (std::size_t k = 0; k < rule.x.size(); ++k) {
                const double s = mid + half * rule.x[k];
                const double kap =
                    half * rule.w[k] * reduced_kernel(n, beta, ri, s, std::abs(s - ri));
                const double lam = (s - a) / (b - a);
                w_left += kap * (1.0 - lam);
                w_right += kap * lam;
            }
            couple(i, j, w_left);
            couple(i, j + 1, w_right);
        }

        const RowTail tail = tail_weights(n, beta, ri, r_max, q);
        couple(i, last, tail.boundary_weight);
        M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += tail.mass_weight;
        op.tail_row_correction(static_cast<Eigen::Index>(i)) = tail.mass_weight;
    }

    // A capped drift means the quadratic model overshot what nonnegativity
    // allows. Small overshoots only perturb an O(h^2) correction; one that
    // rivals the row's total coupling means the local expansion is unusable.
    for (std::size_t i = 1; i < last; ++i) {
        const double mass = M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
        if (drift_excess[i] > 0.10 * mass) {
            std::ostringstream msg;
            msg << "assemble_flap_matrix: drift correction at node " << i
                << " (r = " << r[i] << ") overshoots its stability cap by "
                << drift_excess[i] << ", more than 10% of the row coupling "
                << mass << "; refine the grid near this radius";
            throw GridTooCoarseError(msg.str());
        }
    }

    op.matrix *= scale;
    op.tail_row_correction *= scale;
    return op;
}

RadialFunction apply_flap(const NonlocalOperator& op, const RadialFunction& u) {
    validate_function(u);
    if (!op.grid)
        throw ValidationError("apply_flap: operator has no grid");
    require_same_grid(u, op.grid);
    if (!std::isfinite(u.limit_at_infinity))
        throw ValidationError("apply_flap: non-finite limit_at_infinity");

    const Eigen::Index m = static_cast<Eigen::Index>(u.values.size());
    Eigen::VectorXd shifted(m);
    for (Eigen::Index i = 0; i < m; ++i)
        shifted(i) = u.values[static_cast<std::size_t>(i)] - u.limit_at_infinity;

    const Eigen::VectorXd out = op.matrix * shifted;

    RadialFunction g;
    g.grid = op.grid;
    g.values.assign(out.data(), out.data() + out.size());
    g.limit_at_infinity = 0.0;
    g.tail_power =
        std::min(u.tail_power, static_cast<double>(op.dimension_n)) + op.order_alpha;
    return g;
}

} // namespace fraclap
