#pragma once

#include <string>
#include <vector>

#include "easyfilter/metrics.hpp"

namespace easyfilter {

struct Series {
  std::string label;
  std::vector<double> values;  // plotted against positions 1..n
};

// One <polyline> per series on shared axes.
std::string line_plot_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<Series>& series);

struct BoxGroup {
  std::string label;
  StreamSummary summary;
};

// One box (q1..q3 with median line and min/max whiskers) per group.
std::string boxplot_svg(const std::string& title, const std::string& y_label, const std::vector<BoxGroup>& groups);

}  // namespace easyfilter
