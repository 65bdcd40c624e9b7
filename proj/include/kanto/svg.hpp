#pragma once

// Minimal SVG line charts: axes, tick labels, one polyline per series.

#include <string>
#include <vector>

namespace kanto {

struct ChartSeries {
    std::string name;
    std::vector<double> xs;
    std::vector<double> ys;
};

struct ChartLabels {
    std::string title;
    std::string x_axis;
    std::string y_axis;
};

std::string line_chart_svg(const ChartLabels& labels, const std::vector<ChartSeries>& series,
                           int width = 640, int height = 420);

}  // namespace kanto
