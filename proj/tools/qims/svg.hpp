#pragma once

#include <string>
#include <vector>

namespace qims::cli {

struct Series {
  std::string label;
  std::vector<double> y;
};

/// Self-contained SVG line chart of several series over a shared x grid.
std::string line_chart(const std::string& title, const std::string& x_label, const std::vector<double>& x,
                       const std::vector<Series>& series);

}  // namespace qims::cli
