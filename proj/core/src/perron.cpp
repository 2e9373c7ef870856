#include "fraclap/perron.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "fraclap/csv.hpp"
#include "fraclap/errors.hpp"

namespace fraclap {

namespace {

double power_term(double u, double p) {
    return std::exp(p * std::log(std::max(u, 1e-14)));
}

void require_ordered(const OrderedPair& pair) {
    require_same_grid(pair.sub, pair.super);
    if (!(pair.a > 0.0) || !(pair.a < 1.0))
        throw NotOrderedError("bracket level a outside (0, 1)");
    for (std::size_t i = 0; i < pair.sub.values.size(); ++i) {
        const double lo = pair.sub.values[i];
        const double hi = pair.super.values[i];
        if (!(lo > 0.0) || !(lo <= pair.a) || !(pair.a <= hi) || !(hi < 1.0))
            throw NotOrderedError(
                "bracket violates 0 < sub <= a <= super < 1 at node " +
                std::to_string(i));
    }
}

} // namespace

SolveResult perron_solve(const NonlocalOperator& op, const OrderedPair& pair,
                         const CoefficientPair& coeffs, double p,
                         const PerronOptions& opts) {
    require_ordered(pair);
    require_same_grid(pair.sub, op.grid);
    require_same_grid(coeffs.k, op.grid);
    require_same_grid(coeffs.K, op.grid);
    if (!(p > 1.0))
        throw ValidationError("nonlinearity exponent must exceed 1");
    if (opts.max_iter < 1)
        throw ValidationError("max_iter must be at least 1");

    const Eigen::Index size = op.matrix.rows();
    const Eigen::Index last = size - 1;
    const double a = pair.a;

    // Shift making the sweep map monotone: it must outweigh the steepest
    // admissible slope of K u^p over the bracket, plus the absorption.
    double k_max = 0.0;
    double slope_max = 0.0;
    for (Eigen::Index i = 0; i < size; ++i) {
        const std::size_t si = static_cast<std::size_t>(i);
        k_max = std::max(k_max, coeffs.k.values[si]);
        slope_max = std::max(slope_max, p * std::abs(coeffs.K.values[si]) *
                                            power_term(pair.super.values[si], p - 1.0));
    }
    const double shift = slope_max + k_max;

    Eigen::MatrixXd A = op.matrix;
    for (Eigen::Index i = 0; i < last; ++i)
        A(i, i) += coeffs.k.values[static_cast<std::size_t>(i)] + shift;
    A.row(last).setZero();
    A(last, last) = 1.0;

    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    const double a_norm = A.cwiseAbs().rowwise().sum().maxCoeff();

    Eigen::VectorXd u(size);
    const RadialFunction& start = opts.from_above ? pair.super : pair.sub;
    for (Eigen::Index i = 0; i < size; ++i)
        u(i) = start.values[static_cast<std::size_t>(i)];
    // Iterates from below must rise, from above must fall.
    const double wrong_way = opts.from_above ? 1.0 : -1.0;

    SolveResult out;
    Eigen::VectorXd rhs(size);
    bool converged = false;
    for (int m = 1; m <= opts.max_iter; ++m) {
        for (Eigen::Index i = 0; i < last; ++i) {
            const std::size_t si = static_cast<std::size_t>(i);
            rhs(i) = coeffs.K.values[si] * power_term(u(i), p) + shift * u(i) +
                     a * op.tail_row_correction(i);
        }
        rhs(last) = a;

        const Eigen::VectorXd next = lu.solve(rhs);
        const double solve_err = (A * next - rhs).cwiseAbs().maxCoeff();
        if (!(solve_err <=
              1e-10 * (rhs.cwiseAbs().maxCoeff() + a_norm * next.cwiseAbs().maxCoeff())))
            throw LinearSolveFailureError(
                "perron_solve: factored system residual " +
                std::to_string(solve_err) + " at sweep " + std::to_string(m));

        const double step = (next - u).cwiseAbs().maxCoeff();
        const double slack = 1e-12 * (1.0 + u.cwiseAbs().maxCoeff());
        for (Eigen::Index i = 0; i < size; ++i)
            if (wrong_way * (next(i) - u(i)) > slack)
                ++out.monotone_violations;

        u = next;
        out.iterations = m;
        if (step <= opts.tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NoConvergenceError("perron_solve: step size still above " +
                                 format_double(opts.tol) + " after " +
                                 std::to_string(opts.max_iter) + " sweeps");

    out.u.grid = op.grid;
    out.u.values.assign(u.data(), u.data() + u.size());
    out.u.limit_at_infinity = a;
    out.u.tail_power = pair.sub.tail_power;

    const RadialFunction flap_u = apply_flap(op, out.u);
    double res = 0.0;
    for (Eigen::Index i = 0; i < last; ++i) {
        const std::size_t si = static_cast<std::size_t>(i);
        const double d = flap_u.values[si] + coeffs.k.values[si] * out.u.values[si] -
                         coeffs.K.values[si] * power_term(out.u.values[si], p);
        res = std::max(res, std::abs(d));
    }
    out.residual_inf = res;

    try {
        out.limit_estimate = limit_at_infinity(out.u);
    } catch (const TailNotSettledError&) {
        out.limit_estimate = out.u.values.back();
    }
    return out;
}

double limit_at_infinity(const RadialFunction& u) {
    validate_function(u);
    const auto& r = u.grid->nodes;

    const auto nearest = [&](double target) {
        std::size_t best = 0;
        double gap = std::abs(r[0] - target);
        for (std::size_t i = 1; i < r.size(); ++i) {
            const double g = std::abs(r[i] - target);
            if (g < gap) {
                gap = g;
                best = i;
            }
        }
        return best;
    };

    const std::size_t i1 = r.size() - 1;
    const std::size_t i2 = nearest(0.5 * r[i1]);
    const std::size_t i3 = nearest(0.25 * r[i1]);
    if (i3 >= i2 || i2 >= i1)
        throw ValidationError(
            "limit_at_infinity: grid too coarse to separate r_max/4, r_max/2, r_max");

    const double u1 = u.values[i1];
    const double u2 = u.values[i2];
    const double u3 = u.values[i3];
    const double d_out = u1 - u2;
    const double d_in = u2 - u3;

    if (d_out == 0.0 && d_in == 0.0)
        return u1;
    if (std::abs(d_out) > 10.0 * std::abs(d_in))
        throw TailNotSettledError(
            "limit_at_infinity: outer tail difference exceeds 10x the inner "
            "one; the function has not settled by r_max");
    if (d_out == 0.0)
        return u1;

    // Power model u = L + c r^{-q}: the difference ratio determines q and is
    // strictly increasing in it, so bisection suffices.
    const double ratio = d_in / d_out;
    const auto model_ratio = [&](double q) {
        return (std::pow(r[i3], -q) - std::pow(r[i2], -q)) /
               (std::pow(r[i2], -q) - std::pow(r[i1], -q));
    };
    double q_lo = 1e-3, q_hi = 60.0;
    if (!(ratio > model_ratio(q_lo)))
        throw TailNotSettledError(
            "limit_at_infinity: tail differences are not shrinking outward; "
            "no decaying power law fits");
    if (ratio >= model_ratio(q_hi))
        return u1; // approach faster than r^-60: already at the limit
    for (int it = 0; it < 200; ++it) {
        const double q_mid = 0.5 * (q_lo + q_hi);
        if (model_ratio(q_mid) < ratio)
            q_lo = q_mid;
        else
            q_hi = q_mid;
    }
    const double q = 0.5 * (q_lo + q_hi);
    const double c = d_out / (std::pow(r[i1], -q) - std::pow(r[i2], -q));
    return u1 - c * std::pow(r[i1], -q);
}

FamilyReport solution_family(const std::vector<double>& a_list,
                             const NonlocalOperator& op, const DecayProfile& omega,
                             double tau, double p, double theta1_budget,
                             const std::function<double(double)>& shape_k,
                             const std::function<double(double)>& shape_K,
                             double theta_fraction, const PerronOptions& opts) {
    if (a_list.empty())
        throw ValidationError("solution_family: empty level list");
    for (std::size_t i = 0; i < a_list.size(); ++i) {
        if (!(a_list[i] > 0.0) || !(a_list[i] < 1.0))
            throw ValidationError("solution_family: level outside (0, 1)");
        for (std::size_t j = i + 1; j < a_list.size(); ++j)
            if (a_list[i] == a_list[j])
                throw ValidationError("solution_family: duplicate level " +
                                      std::to_string(a_list[i]));
    }
    if (!(theta_fraction > 0.0) || !(theta_fraction <= 1.0))
        throw ValidationError("solution_family: theta_fraction must be in (0, 1]");

    FamilyReport report;
    report.exponent_p = p;
    report.members.reserve(a_list.size());

    double theta_shared = 0.0;
    for (double a : a_list) {
        FamilyMember member;
        member.a = a;
        member.pair = make_ordered_pair(a, omega, tau, theta1_budget, op.grid,
                                        op.dimension_n, op.order_alpha);
        const double theta = admissible_theta(member.pair, op, omega, tau, p);
        theta_shared = theta_shared == 0.0 ? theta : std::min(theta_shared, theta);
        report.members.push_back(std::move(member));
    }
    report.theta_used = theta_shared * theta_fraction;

    const CoefficientPair coeffs =
        make_coefficient_pair(op.grid, report.theta_used, tau, op.order_alpha,
                              omega, shape_k, shape_K);

    report.distinct_limits = true;
    report.all_positive = true;
    for (FamilyMember& member : report.members) {
        member.result = perron_solve(op, member.pair, coeffs, p, opts);
        member.min_value = *std::min_element(member.result.u.values.begin(),
                                             member.result.u.values.end());
        if (!(member.min_value >= 0.5 * member.a - 1e-8))
            report.all_positive = false;
    }
    for (std::size_t i = 0; i < report.members.size(); ++i)
        for (std::size_t j = i + 1; j < report.members.size(); ++j) {
            const double limit_gap = std::abs(report.members[i].result.limit_estimate -
                                              report.members[j].result.limit_estimate);
            const double level_gap = std::abs(a_list[i] - a_list[j]);
            if (!(limit_gap >= 0.5 * level_gap))
                report.distinct_limits = false;
        }
    return report;
}

} // namespace fraclap
