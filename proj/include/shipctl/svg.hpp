#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace shipctl {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct AxesSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    double width = 860;
    double height = 540;
};

// Self-contained SVG 1.1: one polyline per series, linear axes with tick
// labels, legend from the labels. Output is a pure function of the input.
// Throws std::invalid_argument on an empty series list, a series with fewer
// than two points, mismatched x/y sizes, or non-finite values.
std::string render_svg(std::span<const PlotSeries> series, const AxesSpec& axes);

void emit_svg(std::span<const PlotSeries> series,
              const std::filesystem::path& path, const AxesSpec& axes);

}  // namespace shipctl
