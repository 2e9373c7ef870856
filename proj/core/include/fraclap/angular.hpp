#ifndef FRACLAP_ANGULAR_HPP
#define FRACLAP_ANGULAR_HPP

namespace fraclap {

// Spherical mean of the power-law interaction |x - y|^{-beta} over directions
// of y, for |x| = r and |y| = s:
//
//   A(n, beta, r, s) = average over unit vectors e of |r e1 - s e|^{-beta}
//
// where e1 is any fixed direction. Dimensions 1 and 3 evaluate in closed form
// (two-point mean, resp. an elementary antiderivative in the squared distance);
// other dimensions fall back to a fixed-node polar quadrature. The closed
// forms are exact and cheap, which matters because operator assembly calls
// this for every node pair.
//
// On the diagonal r == s the mean is finite only for beta below n - 1 (below 0
// in dimension one); evaluating it in the divergent range throws
// SingularDiagonalError rather than returning an overflowed value.
double angular_kernel(int dimension, double beta, double r, double s);

// Same mean restricted to directions whose distance d = |x - y| lies in the
// half-open band [d_lo, d_hi). Bands that partition [0, infinity) sum back to
// the unrestricted mean up to roundoff, because each band evaluates the same
// antiderivative at shared cut points. Pass d_hi = infinity for an unbounded
// top. A band with d_lo > 0 never touches the diagonal singularity, so it is
// safe for any beta.
double angular_kernel_band(int dimension, double beta, double r, double s,
                           double d_lo, double d_hi);

// Variant for integrators that track the gap to the singular radius
// explicitly: `separation` is |r - s| computed by the caller. Recomputing the
// difference of two nearly equal radii in double precision loses every digit
// once the gap falls below roundoff of r, and quadrature rules that refine
// toward the diagonal do reach such gaps. All internal paths are arranged so
// the result stays fully accurate for any separation down to the underflow
// threshold.
double angular_kernel_band_at(int dimension, double beta, double r, double s,
                              double separation, double d_lo, double d_hi);

} // namespace fraclap

#endif
