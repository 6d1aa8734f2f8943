#include "ggbm/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ggbm::cli {

namespace {

constexpr double width = 860.0;
constexpr double height = 540.0;
constexpr double margin_left = 80.0;
constexpr double margin_right = 190.0; // room for the legend
constexpr double margin_top = 48.0;
constexpr double margin_bottom = 64.0;

const char* const palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                               "#9467bd", "#ff7f0e", "#8c564b"};
constexpr std::size_t palette_size = sizeof(palette) / sizeof(palette[0]);

std::string num(double v, const char* spec = "%.2f") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return std::string(buf);
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

Range padded(double lo, double hi) {
    if (!(lo <= hi)) return {0.0, 1.0};
    if (hi - lo < 1e-300) {
        const double pad = std::max(1.0, std::fabs(lo)) * 0.1;
        return {lo - pad, hi + pad};
    }
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

} // namespace

void write_svg_chart(const std::string& path, const std::string& title,
                     const std::string& xlabel, const std::string& ylabel,
                     const std::vector<SvgSeries>& series, bool loglog) {
    // Transform to plotting coordinates (log10 in log-log mode, where
    // non-positive points cannot be displayed and are dropped).
    std::vector<SvgSeries> plot;
    plot.reserve(series.size());
    for (const SvgSeries& s : series) {
        SvgSeries t;
        t.name = s.name;
        for (const auto& [x, y] : s.points) {
            if (loglog) {
                if (x > 0.0 && y > 0.0) t.points.emplace_back(std::log10(x), std::log10(y));
            } else {
                t.points.emplace_back(x, y);
            }
        }
        plot.push_back(std::move(t));
    }
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (const SvgSeries& s : plot) {
        for (const auto& [x, y] : s.points) {
            xlo = std::min(xlo, x);
            xhi = std::max(xhi, x);
            ylo = std::min(ylo, y);
            yhi = std::max(yhi, y);
        }
    }
    const Range xr = padded(xlo, xhi);
    const Range yr = padded(ylo, yhi);
    const double plot_w = width - margin_left - margin_right;
    const double plot_h = height - margin_top - margin_bottom;
    const auto px = [&](double x) {
        return margin_left + (x - xr.lo) / (xr.hi - xr.lo) * plot_w;
    };
    const auto py = [&](double y) {
        return margin_top + plot_h - (y - yr.lo) / (yr.hi - yr.lo) * plot_h;
    };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("svg: cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height
        << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"28\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"17\">" << title << "</text>\n";

    // Axes box.
    out << "<rect x=\"" << margin_left << "\" y=\"" << margin_top << "\" width=\""
        << plot_w << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

    // Ticks with grid lines; tick labels show data-space values.
    constexpr int n_ticks = 5;
    for (int i = 0; i <= n_ticks; ++i) {
        const double fx = xr.lo + (xr.hi - xr.lo) * i / n_ticks;
        const double fy = yr.lo + (yr.hi - yr.lo) * i / n_ticks;
        const double gx = px(fx);
        const double gy = py(fy);
        const double label_x = loglog ? std::pow(10.0, fx) : fx;
        const double label_y = loglog ? std::pow(10.0, fy) : fy;
        out << "<line x1=\"" << num(gx) << "\" y1=\"" << margin_top << "\" x2=\""
            << num(gx) << "\" y2=\"" << margin_top + plot_h
            << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out << "<line x1=\"" << margin_left << "\" y1=\"" << num(gy) << "\" x2=\""
            << margin_left + plot_w << "\" y2=\"" << num(gy)
            << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << num(gx) << "\" y=\"" << margin_top + plot_h + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"11\">"
            << num(label_x, "%.4g") << "</text>\n";
        out << "<text x=\"" << margin_left - 8 << "\" y=\"" << num(gy + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << num(label_y, "%.4g") << "</text>\n";
    }

    // Axis labels.
    out << "<text x=\"" << margin_left + plot_w / 2 << "\" y=\"" << height - 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
        << xlabel << (loglog ? " (log)" : "") << "</text>\n";
    out << "<text x=\"22\" y=\"" << margin_top + plot_h / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
        << "transform=\"rotate(-90 22 " << margin_top + plot_h / 2 << ")\">" << ylabel
        << (loglog ? " (log)" : "") << "</text>\n";

    // Series polylines.
    for (std::size_t s = 0; s < plot.size(); ++s) {
        if (plot[s].points.empty()) continue;
        out << "<polyline fill=\"none\" stroke=\"" << palette[s % palette_size]
            << "\" stroke-width=\"1.8\" points=\"";
        for (const auto& [x, y] : plot[s].points) {
            out << num(px(x)) << ',' << num(py(y)) << ' ';
        }
        out << "\"/>\n";
    }

    // Legend.
    const double legend_x = margin_left + plot_w + 14;
    for (std::size_t s = 0; s < plot.size(); ++s) {
        const double ly = margin_top + 14 + 22.0 * static_cast<double>(s);
        out << "<line x1=\"" << legend_x << "\" y1=\"" << ly << "\" x2=\""
            << legend_x + 26 << "\" y2=\"" << ly << "\" stroke=\""
            << palette[s % palette_size] << "\" stroke-width=\"2.5\"/>\n";
        out << "<text x=\"" << legend_x + 32 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << plot[s].name
            << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) throw std::runtime_error("svg: write failed for " + path);
}

} // namespace ggbm::cli
