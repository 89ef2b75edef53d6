#pragma once

#include <string>
#include <vector>

namespace slowlight {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct VerticalMarker {
  double x = 0.0;
  std::string label;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 800;
  int height = 500;
  std::vector<VerticalMarker> markers;
};

// Line chart: fixed canvas, ticked axes, one polyline per series, legend.
// Output depends only on the inputs (fixed number formatting, no clocks).
std::string render_svg(const std::vector<Series>& series, const PlotSpec& spec);

// Round tick positions covering [lo, hi], about `target` of them.
std::vector<double> nice_ticks(double lo, double hi, int target = 6);

}  // namespace slowlight
