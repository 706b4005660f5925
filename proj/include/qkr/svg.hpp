#pragma once

#include <string>
#include <vector>

namespace qkr {

// Hand-rolled SVG line plot; data CSVs remain the authoritative output.
struct SvgCurve {
  std::vector<double> x;
  std::vector<double> y;
  std::string label;
};

struct SvgOptions {
  int width = 720;
  int height = 480;
  bool log_x = false;
  bool log_y = false;
  std::string title;
  std::string x_label = "x";
  std::string y_label = "y";
  double log_floor = 1e-16;  // values at or below this are dropped on log axes
};

std::string svg_line_plot(const std::vector<SvgCurve>& curves, const SvgOptions& options);

}  // namespace qkr
