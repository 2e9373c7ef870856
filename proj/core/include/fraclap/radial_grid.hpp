#ifndef FRACLAP_RADIAL_GRID_HPP
#define FRACLAP_RADIAL_GRID_HPP

#include <cstddef>
#include <memory>
#include <vector>

namespace fraclap {

// Radial quadrature/collocation grid 0 = r_0 < r_1 < ... < r_N = R_max with
// geometrically growing spacings: h_{k+1} = ratio * h_k. The common ratio is
// kept in [1, 4]; fine cells near the origin resolve kernel singularities,
// coarse cells near R_max keep N manageable for R_max of a few hundred.
struct RadialGrid {
    std::vector<double> nodes;
    // Exponent q of the default far-field model value + c * r^{-q} assumed
    // for functions living on this grid beyond R_max.
    double tail_exponent_hint = 4.0;
    // Common ratio of consecutive spacings used at construction.
    double spacing_ratio = 1.0;

    std::size_t cell_count() const { return nodes.empty() ? 0 : nodes.size() - 1; }
    double r_max() const { return nodes.back(); }
    double spacing(std::size_t k) const { return nodes[k + 1] - nodes[k]; }

    // Index i such that nodes[i] <= s < nodes[i+1], clamped to the last cell
    // for s >= R_max.
    std::size_t cell_of(double s) const;

    bool operator==(const RadialGrid&) const = default;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

struct GridSpec {
    std::size_t cells = 256;     // N, must be >= 16
    double r_max = 400.0;
    double ratio = 0.0;          // common spacing ratio; 0 selects automatically
    double first_cell = 1e-3;    // target width of the first cell when ratio is automatic
    double tail_exponent_hint = 4.0;
};

// Builds the graded grid described by the spec and checks the invariants
// (N >= 16, strict monotonicity, spacing ratio within [1, 4]). When
// spec.ratio == 0 the ratio is chosen by bisection so that the first cell
// width comes out near spec.first_cell.
GridPtr make_graded_grid(const GridSpec& spec);

// Validates an externally assembled grid against the same invariants.
void validate_grid(const RadialGrid& grid);

} // namespace fraclap

#endif
