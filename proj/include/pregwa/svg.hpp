#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace pregwa {

struct ChartSeries {
  std::string label;
  std::vector<double> y;  // aligned with the chart's x values; NaN = missing point
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;
  std::vector<ChartSeries> series;
};

// Self-contained SVG line chart with axes, ticks, legend and the full data
// table embedded as an XML comment, so the figure is reviewable as text.
void write_svg_chart(std::ostream& out, const LineChart& chart);
void write_svg_chart(const std::filesystem::path& path, const LineChart& chart);

}  // namespace pregwa
