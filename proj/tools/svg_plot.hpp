#ifndef FRACLAP_TOOLS_SVG_PLOT_HPP
#define FRACLAP_TOOLS_SVG_PLOT_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace fraclap::tools {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    int width = 880;
    int height = 540;
};

// Self-contained line plot, no external renderer. Points that cannot be
// placed (non-finite, or nonpositive on a log axis) are dropped from their
// polyline; a plot with no placeable points still gets its axes so the file
// is always valid SVG. Output is deterministic byte for byte.
void write_svg_plot(std::ostream& os, const PlotSpec& spec,
                    const std::vector<PlotSeries>& series);

} // namespace fraclap::tools

#endif
