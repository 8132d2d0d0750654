#include "pregwa/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "pregwa/errors.hpp"

namespace pregwa {

namespace {

constexpr double kWidth = 720.0, kHeight = 480.0;
constexpr double kLeft = 80.0, kRight = 180.0, kTop = 50.0, kBottom = 60.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#17becf", "#8c564b", "#7f7f7f"};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Round-ish tick step covering the range with 4-8 ticks.
double tick_step(double span) {
  if (span <= 0.0) return 1.0;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  if (frac < 1.5) return mag;
  if (frac < 3.5) return 2.0 * mag;
  if (frac < 7.5) return 5.0 * mag;
  return 10.0 * mag;
}

}  // namespace

void write_svg_chart(std::ostream& out, const LineChart& chart) {
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  if (!chart.x.empty()) {
    xmin = *std::min_element(chart.x.begin(), chart.x.end());
    xmax = *std::max_element(chart.x.begin(), chart.x.end());
  }
  bool have_y = false;
  for (const auto& s : chart.series)
    for (const double v : s.y)
      if (std::isfinite(v)) {
        if (!have_y) {
          ymin = ymax = v;
          have_y = true;
        }
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
      }
  if (!have_y) ymin = 0.0, ymax = 1.0;
  if (xmax == xmin) xmax = xmin + 1.0;
  ymin = std::min(ymin, 0.0);  // air-time style charts read best anchored at zero
  if (ymax == ymin) ymax = ymin + 1.0;
  ymax *= 1.05;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const auto sx = [&](double v) { return kLeft + (v - xmin) / (xmax - xmin) * pw; };
  const auto sy = [&](double v) { return kTop + ph - (v - ymin) / (ymax - ymin) * ph; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";

  // Embedded data table: one header line, then one line per x value.
  out << "<!-- data\nx";
  for (const auto& s : chart.series) out << ',' << s.label;
  out << '\n';
  for (std::size_t i = 0; i < chart.x.size(); ++i) {
    out << fmt(chart.x[i]);
    for (const auto& s : chart.series)
      out << ',' << (i < s.y.size() && std::isfinite(s.y[i]) ? fmt(s.y[i]) : "");
    out << '\n';
  }
  out << "-->\n";

  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << chart.title << "</text>\n";

  // Axes with ticks and grid lines.
  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  const double xstep = tick_step(xmax - xmin);
  for (double v = std::ceil(xmin / xstep) * xstep; v <= xmax + 1e-9; v += xstep) {
    out << "<line x1=\"" << sx(v) << "\" y1=\"" << kTop << "\" x2=\"" << sx(v) << "\" y2=\""
        << kTop + ph << "\" stroke=\"#eee\"/>\n";
    out << "<text x=\"" << sx(v) << "\" y=\"" << kTop + ph + 16
        << "\" text-anchor=\"middle\">" << fmt(v) << "</text>\n";
  }
  const double ystep = tick_step(ymax - ymin);
  for (double v = std::ceil(ymin / ystep) * ystep; v <= ymax + 1e-9; v += ystep) {
    out << "<line x1=\"" << kLeft << "\" y1=\"" << sy(v) << "\" x2=\"" << kLeft + pw
        << "\" y2=\"" << sy(v) << "\" stroke=\"#eee\"/>\n";
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << sy(v) + 4
        << "\" text-anchor=\"end\">" << fmt(v) << "</text>\n";
  }
  out << "</g>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw
      << "\" y2=\"" << kTop + ph << "\" stroke=\"#333\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kTop + ph << "\" stroke=\"#333\"/>\n";
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << chart.x_label << "</text>\n";
  out << "<text x=\"20\" y=\"" << kTop + ph / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 20 " << kTop + ph / 2 << ")\">" << chart.y_label
      << "</text>\n";

  // Series with markers and a legend on the right.
  for (std::size_t s = 0; s < chart.series.size(); ++s) {
    const char* color = kPalette[s % (sizeof kPalette / sizeof *kPalette)];
    const auto& series = chart.series[s];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < chart.x.size() && i < series.y.size(); ++i) {
      if (!std::isfinite(series.y[i])) continue;
      out << fmt(sx(chart.x[i])) << ',' << fmt(sy(series.y[i])) << ' ';
    }
    out << "\"/>\n";
    for (std::size_t i = 0; i < chart.x.size() && i < series.y.size(); ++i) {
      if (!std::isfinite(series.y[i])) continue;
      out << "<circle cx=\"" << fmt(sx(chart.x[i])) << "\" cy=\"" << fmt(sy(series.y[i]))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    const double ly = kTop + 14 + 18 * static_cast<double>(s);
    out << "<line x1=\"" << kLeft + pw + 12 << "\" y1=\"" << ly << "\" x2=\""
        << kLeft + pw + 34 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kLeft + pw + 40 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << series.label << "</text>\n";
  }
  out << "</svg>\n";
}

void write_svg_chart(const std::filesystem::path& path, const LineChart& chart) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path.string());
  write_svg_chart(out, chart);
}

}  // namespace pregwa
