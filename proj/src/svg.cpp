#include "kanto/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace kanto {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string fixed(double v, int digits = 2) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*f", digits, v);
    return buffer;
}

std::string tick_text(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.4g", v);
    return buffer;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string line_chart_svg(const ChartLabels& labels, const std::vector<ChartSeries>& series,
                           int width, int height) {
    double x_lo = std::numeric_limits<double>::infinity();
    double x_hi = -x_lo;
    double y_lo = x_lo;
    double y_hi = -x_lo;
    for (const auto& s : series) {
        for (double x : s.xs) {
            x_lo = std::min(x_lo, x);
            x_hi = std::max(x_hi, x);
        }
        for (double y : s.ys) {
            if (!std::isfinite(y)) continue;
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
        }
    }
    if (!(x_lo < x_hi)) {
        x_lo = std::isfinite(x_lo) ? x_lo - 1.0 : 0.0;
        x_hi = x_lo + 2.0;
    }
    if (!(y_lo < y_hi)) {
        y_lo = std::isfinite(y_lo) ? y_lo - 1.0 : 0.0;
        y_hi = y_lo + 2.0;
    }

    const double left = 70.0, right = 150.0, top = 40.0, bottom = 50.0;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * plot_w; };
    auto py = [&](double y) { return top + (y_hi - y) / (y_hi - y_lo) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
        << escape(labels.title) << "</text>\n";
    svg << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top + plot_h) << "\" x2=\""
        << fixed(left + plot_w) << "\" y2=\"" << fixed(top + plot_h) << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top) << "\" x2=\"" << fixed(left)
        << "\" y2=\"" << fixed(top + plot_h) << "\" stroke=\"black\"/>\n";

    constexpr int kTicks = 5;
    for (int i = 0; i <= kTicks; ++i) {
        const double x = x_lo + (x_hi - x_lo) * i / kTicks;
        const double y = y_lo + (y_hi - y_lo) * i / kTicks;
        svg << "<line x1=\"" << fixed(px(x)) << "\" y1=\"" << fixed(top + plot_h) << "\" x2=\""
            << fixed(px(x)) << "\" y2=\"" << fixed(top + plot_h + 5) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fixed(px(x)) << "\" y=\"" << fixed(top + plot_h + 18)
            << "\" text-anchor=\"middle\">" << tick_text(x) << "</text>\n";
        svg << "<line x1=\"" << fixed(left - 5) << "\" y1=\"" << fixed(py(y)) << "\" x2=\""
            << fixed(left) << "\" y2=\"" << fixed(py(y)) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fixed(left - 8) << "\" y=\"" << fixed(py(y) + 4)
            << "\" text-anchor=\"end\">" << tick_text(y) << "</text>\n";
    }
    svg << "<text x=\"" << fixed(left + plot_w / 2) << "\" y=\"" << height - 10
        << "\" text-anchor=\"middle\">" << escape(labels.x_axis) << "</text>\n";
    svg << "<text x=\"16\" y=\"" << fixed(top + plot_h / 2) << "\" text-anchor=\"middle\" "
        << "transform=\"rotate(-90 16 " << fixed(top + plot_h / 2) << ")\">"
        << escape(labels.y_axis) << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kPalette[k % std::size(kPalette)];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        const std::size_t n = std::min(s.xs.size(), s.ys.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(s.ys[i])) continue;
            svg << fixed(px(s.xs[i])) << ',' << fixed(py(s.ys[i])) << ' ';
        }
        svg << "\"/>\n";
        const double legend_y = top + 14.0 * static_cast<double>(k);
        svg << "<line x1=\"" << fixed(left + plot_w + 12) << "\" y1=\"" << fixed(legend_y)
            << "\" x2=\"" << fixed(left + plot_w + 32) << "\" y2=\"" << fixed(legend_y)
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << fixed(left + plot_w + 36) << "\" y=\"" << fixed(legend_y + 4)
            << "\">" << escape(s.name) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace kanto
