#pragma once

// Minimal deterministic SVG line and heatmap emitters for derived plots.

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace translab {

struct SvgSeries {
  std::string label;
  Eigen::ArrayXd x, y;
};

/// Polyline plot with axes; returns the SVG document.
std::string svg_line_plot(const std::vector<SvgSeries>& series, const std::string& title,
                          int width = 640, int height = 420);

/// Grayscale heatmap of a matrix (rows -> y, cols -> x).
std::string svg_heatmap(const Eigen::MatrixXd& values, const std::string& title, int cell = 4);

}  // namespace translab
