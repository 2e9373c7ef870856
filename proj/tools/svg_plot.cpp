#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "fraclap/csv.hpp"

namespace fraclap::tools {

namespace {

constexpr int kMarginLeft = 76;
constexpr int kMarginRight = 24;
constexpr int kMarginTop = 44;
constexpr int kMarginBottom = 56;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                "#9467bd", "#ff7f0e", "#8c564b"};
constexpr int kPaletteSize = 6;

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (const char ch : s) {
        if (ch == '&')
            out += "&amp;";
        else if (ch == '<')
            out += "&lt;";
        else if (ch == '>')
            out += "&gt;";
        else
            out += ch;
    }
    return out;
}

struct Axis {
    bool log = false;
    double lo = 0.0; // in plot units: log10 of the value on a log axis
    double hi = 1.0;
    std::vector<double> ticks; // in plot units

    bool placeable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
    double to_unit(double v) const { return log ? std::log10(v) : v; }
    double tick_value(double t) const { return log ? std::pow(10.0, t) : t; }
};

// Tick step of the form {1, 2, 5} * 10^k nearest to span/5 from below.
double nice_step(double span) {
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    if (frac >= 5.0)
        return 5.0 * mag;
    if (frac >= 2.0)
        return 2.0 * mag;
    return mag;
}

Axis make_axis(bool log, double data_lo, double data_hi) {
    Axis ax;
    ax.log = log;
    double lo = data_lo;
    double hi = data_hi;
    if (!(lo <= hi)) { // no placeable data at all
        lo = log ? 0.0 : 0.0;
        hi = log ? 1.0 : 1.0;
    }
    if (lo == hi) {
        const double pad = log ? 0.5 : (lo == 0.0 ? 0.5 : 0.1 * std::abs(lo));
        lo -= pad;
        hi += pad;
    } else {
        const double pad = 0.04 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
    ax.lo = lo;
    ax.hi = hi;

    if (log) {
        const int d_lo = static_cast<int>(std::ceil(lo - 1e-9));
        const int d_hi = static_cast<int>(std::floor(hi + 1e-9));
        const int decades = std::max(0, d_hi - d_lo);
        const int step = std::max(1, (decades + 7) / 8);
        for (int d = d_lo; d <= d_hi; d += step)
            ax.ticks.push_back(static_cast<double>(d));
    } else {
        const double step = nice_step(hi - lo);
        const double first = std::ceil(lo / step) * step;
        for (double t = first; t <= hi + 0.5 * step; t += step)
            ax.ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    }
    return ax;
}

} // namespace

void write_svg_plot(std::ostream& os, const PlotSpec& spec,
                    const std::vector<PlotSeries>& series) {
    const double plot_w = spec.width - kMarginLeft - kMarginRight;
    const double plot_h = spec.height - kMarginTop - kMarginBottom;

    double x_lo = 1.0, x_hi = 0.0, y_lo = 1.0, y_hi = 0.0; // inverted = empty
    Axis x_probe;
    x_probe.log = spec.log_x;
    Axis y_probe;
    y_probe.log = spec.log_y;
    for (const auto& s : series) {
        const std::size_t count = std::min(s.x.size(), s.y.size());
        for (std::size_t i = 0; i < count; ++i) {
            if (!x_probe.placeable(s.x[i]) || !y_probe.placeable(s.y[i]))
                continue;
            const double ux = x_probe.to_unit(s.x[i]);
            const double uy = y_probe.to_unit(s.y[i]);
            if (x_lo > x_hi) {
                x_lo = x_hi = ux;
                y_lo = y_hi = uy;
            } else {
                x_lo = std::min(x_lo, ux);
                x_hi = std::max(x_hi, ux);
                y_lo = std::min(y_lo, uy);
                y_hi = std::max(y_hi, uy);
            }
        }
    }
    const bool have_data = x_lo <= x_hi;
    const Axis ax = make_axis(spec.log_x, x_lo, x_hi);
    const Axis ay = make_axis(spec.log_y, y_lo, y_hi);

    const auto sx = [&](double unit) {
        return kMarginLeft + (unit - ax.lo) / (ax.hi - ax.lo) * plot_w;
    };
    const auto sy = [&](double unit) {
        return kMarginTop + plot_h - (unit - ay.lo) / (ay.hi - ay.lo) * plot_h;
    };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width
       << "\" height=\"" << spec.height << "\" viewBox=\"0 0 " << spec.width << " "
       << spec.height << "\">\n";
    os << "<rect width=\"" << spec.width << "\" height=\"" << spec.height
       << "\" fill=\"white\"/>\n";
    if (!spec.title.empty())
        os << "<text x=\"" << px(spec.width / 2.0)
           << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
              "font-size=\"15\">"
           << escape_xml(spec.title) << "</text>\n";

    for (const double t : ax.ticks) {
        const double gx = sx(t);
        os << "<line x1=\"" << px(gx) << "\" y1=\"" << kMarginTop << "\" x2=\""
           << px(gx) << "\" y2=\"" << px(kMarginTop + plot_h)
           << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        os << "<text x=\"" << px(gx) << "\" y=\"" << px(kMarginTop + plot_h + 18)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
           << escape_xml(format_double(ax.tick_value(t))) << "</text>\n";
    }
    for (const double t : ay.ticks) {
        const double gy = sy(t);
        os << "<line x1=\"" << kMarginLeft << "\" y1=\"" << px(gy) << "\" x2=\""
           << px(kMarginLeft + plot_w) << "\" y2=\"" << px(gy)
           << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        os << "<text x=\"" << px(kMarginLeft - 8) << "\" y=\"" << px(gy + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
           << escape_xml(format_double(ay.tick_value(t))) << "</text>\n";
    }

    os << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\""
       << px(plot_w) << "\" height=\"" << px(plot_h)
       << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

    if (!spec.x_label.empty())
        os << "<text x=\"" << px(kMarginLeft + plot_w / 2.0) << "\" y=\""
           << px(spec.height - 14)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
           << escape_xml(spec.x_label) << "</text>\n";
    if (!spec.y_label.empty())
        os << "<text x=\"18\" y=\"" << px(kMarginTop + plot_h / 2.0)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
              "transform=\"rotate(-90 18 "
           << px(kMarginTop + plot_h / 2.0) << ")\">" << escape_xml(spec.y_label)
           << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % kPaletteSize];
        std::string points;
        const std::size_t count = std::min(s.x.size(), s.y.size());
        for (std::size_t i = 0; i < count; ++i) {
            if (!ax.placeable(s.x[i]) || !ay.placeable(s.y[i]))
                continue;
            if (!points.empty())
                points += ' ';
            points += px(sx(ax.to_unit(s.x[i])));
            points += ',';
            points += px(sy(ay.to_unit(s.y[i])));
        }
        if (!points.empty())
            os << "<polyline points=\"" << points << "\" fill=\"none\" stroke=\""
               << color << "\" stroke-width=\"1.6\"/>\n";

        const double ly = kMarginTop + 14 + 18.0 * static_cast<double>(si);
        const double lx = kMarginLeft + plot_w - 150;
        os << "<line x1=\"" << px(lx) << "\" y1=\"" << px(ly - 4) << "\" x2=\""
           << px(lx + 22) << "\" y2=\"" << px(ly - 4) << "\" stroke=\"" << color
           << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << px(lx + 28) << "\" y=\"" << px(ly)
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape_xml(s.label)
           << "</text>\n";
    }

    if (!have_data)
        os << "<text x=\"" << px(kMarginLeft + plot_w / 2.0) << "\" y=\""
           << px(kMarginTop + plot_h / 2.0)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
              "fill=\"#888888\">no plottable points</text>\n";

    os << "</svg>\n";
}

} // namespace fraclap::tools
