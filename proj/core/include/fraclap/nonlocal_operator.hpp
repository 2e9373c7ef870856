#ifndef FRACLAP_NONLOCAL_OPERATOR_HPP
#define FRACLAP_NONLOCAL_OPERATOR_HPP

#include <Eigen/Dense>

#include "fraclap/radial_function.hpp"

namespace fraclap {

// Dense discretization of the fractional Laplacian of order alpha in (0, 2)
// acting on radial functions that approach a constant at infinity.
//
// Row i realizes the principal-value integral in difference form,
//
//   (L u)_i = sum_j m_ij (u_i - u_j) + a_i (u_i - u_N) + b_i (u_i - u_inf),
//
// with every weight nonnegative, so the discrete comparison principle holds
// by construction. The a_i term couples to the boundary node through the
// decaying part of the far field, modeled as (u_N - u_inf) (s/r_max)^{-q}
// with q = tail_power taken from the grid's tail_exponent_hint; b_i collects
// the constant far-field mass and is stored in tail_row_correction. Both are
// folded into `matrix` so that applying it to (u - u_inf) evaluates the whole
// operator; constants are annihilated exactly because the shift happens
// before any matrix arithmetic.
//
// The last row is zero: node N carries the boundary value and the operator
// is only meaningful on rows 0..N-1.
struct NonlocalOperator {
    GridPtr grid;
    int dimension_n = 3;
    double order_alpha = 1.0;
    double tail_power = 4.0;
    Eigen::MatrixXd matrix;
    Eigen::VectorXd tail_row_correction;
    // Rows where the odd-part (drift) correction of the diagonal window had
    // to be capped to keep all weights nonnegative. Routine near the origin
    // on graded grids; a diagnostic, not an error.
    int drift_capped_rows = 0;

    std::size_t size() const { return grid ? grid->nodes.size() : 0; }
};

// Assembles the operator on the given grid. The diagonal singularity is
// handled on the symmetric window [r_i - h, r_i + h], h = min of the two
// adjacent spacings, with a three-point quadratic interpolant: its even part
// weights the second difference, its odd part corrects for the drift of the
// kernel's smooth prefactor across the window. Elsewhere the function is
// taken piecewise linear and integrated cell by cell against the kernel.
//
// Throws GridTooCoarseError when some row's requested drift correction
// overshoots the nonnegativity cap by more than 10% of that row's total
// coupling mass; the local expansion cannot be trusted on such a grid.
NonlocalOperator assemble_flap_matrix(const GridPtr& grid, int dimension, double alpha);

// Applies the operator to samples of u. The far field uses u.limit_at_infinity;
// the decaying-tail exponent is the one baked in at assembly (op.tail_power),
// so functions whose tail_power differs get a slightly mismatched tail model.
// Output: samples of the operator value, zero limit, and a reported (not
// asserted) tail power min(u.tail_power, dimension) + alpha.
RadialFunction apply_flap(const NonlocalOperator& op, const RadialFunction& u);

} // namespace fraclap

#endif
