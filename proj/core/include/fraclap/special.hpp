#ifndef FRACLAP_SPECIAL_HPP
#define FRACLAP_SPECIAL_HPP

namespace fraclap {

// Surface measure of the unit sphere S^{n-1} and volume of the unit ball.
double sphere_measure(int n);
double ball_volume(int n);

// Normalization gamma(n, alpha) of the Riesz potential
//
//   (I_alpha f)(x) = gamma(n, alpha) * integral f(y) |x - y|^{alpha - n} dy,
//
// chosen so that I_alpha inverts the fractional Laplacian of order alpha.
// Requires n >= 1 and 0 < alpha < n.
double riesz_constant(int n, double alpha);

// Normalization C(n, alpha) of the hypersingular principal-value form
//
//   ((-Delta)^{alpha/2} u)(x)
//     = C(n, alpha) * PV integral (u(x) - u(y)) |x - y|^{-n - alpha} dy.
//
// Requires n >= 1 and 0 < alpha < 2.
double flap_constant(int n, double alpha);

// The constant 1 / (n (n-2) |B_1|) that normalizes the Newtonian potential
// kernel of -Delta in dimension n >= 3. For n = 3 it equals 1/(4 pi) and
// coincides with riesz_constant(3, 2); exposed so reports can show both side
// by side. Throws BadOrderError for n < 3.
double newtonian_constant(int n);

} // namespace fraclap

#endif
