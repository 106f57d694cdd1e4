#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dicke::cli {

struct Series {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;  // NaN breaks the line
  bool dashed = false;
  bool right_axis = false;
};

struct Axis {
  std::string label;
  bool log_scale = false;
};

// Static line chart with an optional secondary y axis on the right.
struct LineChart {
  std::string title;
  Axis x_axis;
  Axis left_axis;
  Axis right_axis;
  std::vector<Series> series;

  void write_svg(std::ostream& out) const;
};

}  // namespace dicke::cli
