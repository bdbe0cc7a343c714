#pragma once

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

namespace magbell {

struct PlotSeries {
  std::string name;
  std::string color;  // any SVG color
  std::vector<std::pair<double, double>> points;
  bool markers = false;
};

/// Standalone SVG line plot with axes, ticks, legend, and the raw data
/// embedded as comments.
std::string svg_line_plot(const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<PlotSeries>& series);

void write_line_plot(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<PlotSeries>& series);

/// Matrix-entry bar chart: one bar per entry on a row/column grid, positive
/// up and negative down, with the target entries drawn as dashed outlines.
std::string svg_matrix_bars(const std::string& title, const Eigen::MatrixXd& values,
                            const Eigen::MatrixXd& target,
                            const std::vector<std::string>& labels);

void write_matrix_bars(const std::string& path, const std::string& title,
                       const Eigen::MatrixXd& values, const Eigen::MatrixXd& target,
                       const std::vector<std::string>& labels);

}  // namespace magbell
