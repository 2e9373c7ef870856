#ifndef FRACLAP_RIESZ_POTENTIAL_HPP
#define FRACLAP_RIESZ_POTENTIAL_HPP

#include "fraclap/radial_function.hpp"

namespace fraclap {

// Classification of a point y relative to the evaluation point x of the
// potential, by the distance |x - y| measured against |x|:
//
//   Inner   distance <= |x|/2      (the kernel singularity lives here)
//   Middle  |x|/2 <= distance <= 2|x|
//   Outer   distance >= 2|x|
//
// Boundary distances resolve to the smaller-numbered region.
enum class Region { Inner = 1, Middle = 2, Outer = 3 };

// y is given by its radius and the polar angle between y and x. x_radius
// must be positive.
Region region_split(double x_radius, double y_radius, double y_angle);

// The potential at one radius, split over the three regions. The pieces are
// computed independently, so inner + middle + outer reproduces the full
// potential only up to quadrature tolerance. The middle term is the one
// that stays bounded away from zero when f does, which makes it the witness
// for lower envelope fits.
struct PotentialSplit {
    double inner = 0.0;
    double middle = 0.0;
    double outer = 0.0;

    double total() const { return inner + middle + outer; }
};

// Riesz potential w = I_alpha f of a radial source, normalized so that the
// fractional Laplacian of order alpha inverts it:
//
//   w(r_i) = gamma(n, alpha) * integral_0^inf f(s) s^{n-1} |S^{n-1}|
//                                A(n, n - alpha, r_i, s) ds,
//
// with A the spherical mean of the distance kernel (see angular.hpp).
// Requires 0 < alpha < n.
//
// Quadrature: the s-axis is cut at every grid node (f is piecewise linear)
// and at the radii where a distance band clips; the piece touching s = r_i
// carries the integrable kernel singularity and goes through the
// double-exponential rule with exact endpoint distances, every other piece
// through Gauss-Legendre bisected adaptively to 1e-8 relative. Beyond R_max
// the far-field model c s^{-tail_power} is integrated after the reciprocal
// substitution s = R_max/x, which maps (R_max, inf) onto (0, 1] with an
// integrable endpoint.
//
// Errors: NonIntegrableTailError when f.tail_power <= alpha (the integral
// diverges at infinity), NonzeroSourceLimitError when f does not tend to
// zero. The result has zero limit and tail_power = min(n, f.tail_power) -
// alpha: sources thinner than the mass scale r^{-n} leave a potential
// controlled by their total mass, heavier tails shine through directly.
RadialFunction riesz_potential(const RadialFunction& f, const GridPtr& grid,
                               int dimension, double alpha);

// Same integral restricted to the three distance regions around one
// evaluation radius in (0, r_max]. Preconditions as riesz_potential.
PotentialSplit split_contributions(const RadialFunction& f, double x_radius,
                                   int dimension, double alpha);

} // namespace fraclap

#endif
