#pragma once

// Minimal SVG plots rendered from CSV columns: axes, ticks, labels.

#include <string>
#include <vector>

namespace astra::cli::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Line plot with markers. log2_x spaces the x axis by powers of two.
/// An optional horizontal reference line is drawn dashed.
std::string line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series, bool log2_x, const double* reference_y = nullptr,
                       const std::string& reference_label = "");

/// One stacked bar of non-negative parts, shown as percentages of the sum.
std::string stacked_bar(const std::string& title, const std::vector<std::string>& labels,
                        const std::vector<double>& values);

}  // namespace astra::cli::svg
