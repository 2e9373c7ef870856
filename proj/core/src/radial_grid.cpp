#include "fraclap/radial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fraclap/errors.hpp"

namespace fraclap {

namespace {

constexpr double kRatioMin = 1.0;
constexpr double kRatioMax = 4.0;

// First cell width of the geometric spacing sequence that spans [0, r_max]
// with N cells and common ratio rho: h0 = r_max (rho - 1) / (rho^N - 1).
double first_cell_width(double r_max, std::size_t cells, double rho) {
    if (rho <= 1.0 + 1e-12)
        return r_max / static_cast<double>(cells);
    // rho^N can overflow for large N; work with logs.
    const double log_pow = static_cast<double>(cells) * std::log(rho);
    if (log_pow > 700.0)
        return 0.0;
    return r_max * (rho - 1.0) / (std::exp(log_pow) - 1.0);
}

double pick_ratio(double r_max, std::size_t cells, double target_first) {
    // first_cell_width decreases monotonically in rho, so bisection applies.
    double lo = 1.0, hi = kRatioMax;
    if (first_cell_width(r_max, cells, hi) > target_first)
        return hi;
    if (first_cell_width(r_max, cells, lo + 1e-12) < target_first)
        return lo;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (first_cell_width(r_max, cells, mid) > target_first)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

std::size_t RadialGrid::cell_of(double s) const {
    auto it = std::upper_bound(nodes.begin(), nodes.end(), s);
    if (it == nodes.begin())
        return 0;
    std::size_t i = static_cast<std::size_t>(it - nodes.begin()) - 1;
    return std::min(i, cell_count() - 1);
}

GridPtr make_graded_grid(const GridSpec& spec) {
    if (spec.cells < 16)
        throw GridTooCoarseError("grid needs at least 16 cells, got " +
                                 std::to_string(spec.cells));
    if (!(spec.r_max > 0.0))
        throw ValidationError("grid r_max must be positive");

    double rho = spec.ratio;
    if (rho == 0.0)
        rho = pick_ratio(spec.r_max, spec.cells, spec.first_cell);
    if (!(rho >= kRatioMin) || !(rho <= kRatioMax))
        throw ValidationError("grid spacing ratio must lie in [1, 4], got " +
                              std::to_string(rho));

    auto grid = std::make_shared<RadialGrid>();
    grid->tail_exponent_hint = spec.tail_exponent_hint;
    grid->spacing_ratio = rho;
    grid->nodes.resize(spec.cells + 1);
    grid->nodes[0] = 0.0;
    const double h0 = first_cell_width(spec.r_max, spec.cells, rho);
    double h = h0;
    for (std::size_t i = 1; i <= spec.cells; ++i) {
        grid->nodes[i] = grid->nodes[i - 1] + h;
        h *= rho;
    }
    // The geometric sum lands within roundoff of r_max; pin it exactly so
    // that R_max comparisons are reliable.
    grid->nodes[spec.cells] = spec.r_max;
    validate_grid(*grid);
    return grid;
}

void validate_grid(const RadialGrid& grid) {
    if (grid.cell_count() < 16)
        throw GridTooCoarseError("grid needs at least 16 cells");
    if (grid.nodes.front() != 0.0)
        throw ValidationError("grid must start at r = 0");
    for (std::size_t i = 0; i + 1 < grid.nodes.size(); ++i)
        if (!(grid.nodes[i] < grid.nodes[i + 1]))
            throw ValidationError("grid nodes must be strictly increasing");
    for (std::size_t k = 0; k + 1 < grid.cell_count(); ++k) {
        const double q = grid.spacing(k + 1) / grid.spacing(k);
        if (q < kRatioMin - 1e-9 || q > kRatioMax + 1e-9)
            throw ValidationError("spacing ratio " + std::to_string(q) +
                                  " outside [1, 4] at cell " + std::to_string(k));
    }
    if (!(grid.tail_exponent_hint > 0.0))
        throw ValidationError("tail_exponent_hint must be positive");
}

} // namespace fraclap
