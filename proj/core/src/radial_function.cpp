#include "fraclap/radial_function.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fraclap/errors.hpp"

namespace fraclap {

double RadialFunction::tail_coefficient() const {
    const double dev = values.back() - limit_at_infinity;
    if (dev == 0.0)
        return 0.0;
    return dev * std::pow(grid->r_max(), tail_power);
}

double RadialFunction::operator()(double r) const {
    const auto& nodes = grid->nodes;
    if (r >= nodes.back()) {
        const double c = tail_coefficient();
        if (c == 0.0)
            return limit_at_infinity;
        return limit_at_infinity + c * std::pow(r, -tail_power);
    }
    const std::size_t k = grid->cell_of(r);
    const double t = (r - nodes[k]) / grid->spacing(k);
    return values[k] + t * (values[k + 1] - values[k]);
}

RadialFunction sample(const GridPtr& grid, const std::function<double(double)>& fn,
                      double limit_at_infinity, double tail_power) {
    RadialFunction f;
    f.grid = grid;
    f.values.resize(grid->nodes.size());
    for (std::size_t i = 0; i < grid->nodes.size(); ++i)
        f.values[i] = fn(grid->nodes[i]);
    f.limit_at_infinity = limit_at_infinity;
    f.tail_power = tail_power > 0.0 ? tail_power : grid->tail_exponent_hint;
    return f;
}

RadialFunction constant_function(const GridPtr& grid, double value) {
    RadialFunction f;
    f.grid = grid;
    f.values.assign(grid->nodes.size(), value);
    f.limit_at_infinity = value;
    f.tail_power = grid->tail_exponent_hint;
    return f;
}

void validate_function(const RadialFunction& f) {
    if (!f.grid)
        throw ValidationError("radial function has no grid");
    if (f.values.size() != f.grid->nodes.size())
        throw GridMismatchError("value count " + std::to_string(f.values.size()) +
                                " does not match node count " +
                                std::to_string(f.grid->nodes.size()));
    if (!(f.tail_power > 0.0))
        throw ValidationError("tail_power must be positive");
    for (double v : f.values)
        if (!std::isfinite(v))
            throw ValidationError("radial function holds non-finite values");
    if (!std::isfinite(f.limit_at_infinity))
        throw ValidationError("limit_at_infinity must be finite");
}

void require_same_grid(const RadialFunction& a, const RadialFunction& b) {
    if (a.grid == b.grid)
        return;
    if (!a.grid || !b.grid || !(*a.grid == *b.grid))
        throw GridMismatchError("radial functions live on different grids");
}

void require_same_grid(const RadialFunction& a, const GridPtr& grid) {
    if (a.grid == grid)
        return;
    if (!a.grid || !grid || !(*a.grid == *grid))
        throw GridMismatchError("radial function does not live on the expected grid");
}

double max_abs(const RadialFunction& f) {
    double m = 0.0;
    for (double v : f.values)
        m = std::max(m, std::fabs(v));
    return m;
}

} // namespace fraclap
