#ifndef FRACLAP_RADIAL_FUNCTION_HPP
#define FRACLAP_RADIAL_FUNCTION_HPP

#include <functional>

#include "fraclap/radial_grid.hpp"

namespace fraclap {

// Sampled radial function: piecewise linear between grid nodes, together
// with an explicit far-field model
//
//   f(r) ~= limit_at_infinity + c * r^{-tail_power}   for r > R_max,
//
// where c is calibrated so the model is continuous at R_max. Keeping the
// model explicit is what lets operator and potential quadratures integrate
// past the grid instead of silently truncating.
struct RadialFunction {
    GridPtr grid;
    std::vector<double> values;
    double limit_at_infinity = 0.0;
    double tail_power = 4.0;

    // Tail amplitude c = (f(R_max) - limit) * R_max^{tail_power}.
    double tail_coefficient() const;

    // Piecewise-linear value for r <= R_max, far-field model beyond.
    double operator()(double r) const;
};

// Samples fn at the grid nodes. tail_power <= 0 means "inherit the grid's
// tail_exponent_hint".
RadialFunction sample(const GridPtr& grid, const std::function<double(double)>& fn,
                      double limit_at_infinity = 0.0, double tail_power = 0.0);

RadialFunction constant_function(const GridPtr& grid, double value);

// Checks that values match the grid and that the far-field model is
// meaningful: |f(R_max) - limit| must not exceed ~1% of max |f| unless the
// tail power is positive (a flat function is always fine).
void validate_function(const RadialFunction& f);

// Throws GridMismatchError unless both functions live on the same grid.
void require_same_grid(const RadialFunction& a, const RadialFunction& b);
void require_same_grid(const RadialFunction& a, const GridPtr& grid);

double max_abs(const RadialFunction& f);

} // namespace fraclap

#endif
