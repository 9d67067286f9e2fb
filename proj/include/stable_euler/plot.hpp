#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stable_euler {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = true;
  bool dashed = false;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<PlotSeries> series;
};

// Static SVG (640 x 420) with axes, decade or linear ticks and a legend.
// Non-positive values are dropped from logarithmic axes. Output depends only
// on the plot contents.
void write_svg(const Plot& plot, std::ostream& os);
void write_svg(const Plot& plot, const std::string& path);

}  // namespace stable_euler
