#pragma once

#include <string>
#include <utility>
#include <vector>

namespace dirlab::app {

struct Line {
  std::string label;
  std::vector<std::pair<double, double>> points;
  bool dashed = false;
};

struct Panel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Line> lines;
};

/// Self-contained SVG with the panels side by side.
std::string render_svg(const std::vector<Panel>& panels);

}  // namespace dirlab::app
