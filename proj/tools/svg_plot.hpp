// Minimal SVG chart rendering for the plot subcommand: polyline series,
// optional log axes, ticks and a legend. No external dependencies.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace levyrbm::plot {

struct Series {
  std::string label;
  std::vector<double> xs;
  std::vector<double> ys;
  std::string color = "#1f6fb2";
  bool markers = true;
};

struct ChartSpec {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool logx = false;
  bool logy = false;
  std::vector<Series> series;
};

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

}  // namespace detail

inline std::string render_svg(const ChartSpec& chart) {
  constexpr double kWidth = 760, kHeight = 520;
  constexpr double kLeft = 78, kRight = 30, kTop = 48, kBottom = 64;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  auto fwd_x = [&](double v) { return chart.logx ? std::log(v) : v; };
  auto fwd_y = [&](double v) { return chart.logy ? std::log(v) : v; };

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : chart.series) {
    for (std::size_t k = 0; k < s.xs.size(); ++k) {
      if ((chart.logx && !(s.xs[k] > 0)) || (chart.logy && !(s.ys[k] > 0)))
        throw std::invalid_argument("render_svg: nonpositive value on a log axis");
      xmin = std::min(xmin, fwd_x(s.xs[k]));
      xmax = std::max(xmax, fwd_x(s.xs[k]));
      ymin = std::min(ymin, fwd_y(s.ys[k]));
      ymax = std::max(ymax, fwd_y(s.ys[k]));
    }
  }
  if (!(xmin <= xmax)) throw std::invalid_argument("render_svg: no data");
  if (xmax - xmin < 1e-12) { xmin -= 0.5; xmax += 0.5; }
  if (ymax - ymin < 1e-12) { ymin -= 0.5; ymax += 0.5; }
  const double x_pad = 0.04 * (xmax - xmin), y_pad = 0.06 * (ymax - ymin);
  xmin -= x_pad; xmax += x_pad; ymin -= y_pad; ymax += y_pad;

  auto px = [&](double v) { return kLeft + (fwd_x(v) - xmin) / (xmax - xmin) * plot_w; };
  auto py = [&](double v) { return kTop + plot_h - (fwd_y(v) - ymin) / (ymax - ymin) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << kHeight
      << "' viewBox='0 0 " << kWidth << " " << kHeight << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n"
      << "<text x='" << kWidth / 2 << "' y='26' text-anchor='middle' font-size='17' "
         "font-family='sans-serif'>" << chart.title << "</text>\n";

  // frame + ticks
  svg << "<rect x='" << kLeft << "' y='" << kTop << "' width='" << plot_w << "' height='"
      << plot_h << "' fill='none' stroke='#444'/>\n";
  constexpr int kTicks = 5;
  for (int t = 0; t <= kTicks; ++t) {
    const double fx = xmin + (xmax - xmin) * t / kTicks;
    const double fy = ymin + (ymax - ymin) * t / kTicks;
    const double vx = chart.logx ? std::exp(fx) : fx;
    const double vy = chart.logy ? std::exp(fy) : fy;
    const double sx = kLeft + plot_w * t / kTicks;
    const double sy = kTop + plot_h - plot_h * t / kTicks;
    svg << "<line x1='" << sx << "' y1='" << kTop + plot_h << "' x2='" << sx << "' y2='"
        << kTop + plot_h + 5 << "' stroke='#444'/>\n"
        << "<text x='" << sx << "' y='" << kTop + plot_h + 20
        << "' text-anchor='middle' font-size='12' font-family='sans-serif'>"
        << detail::tick_label(vx) << "</text>\n"
        << "<line x1='" << kLeft - 5 << "' y1='" << sy << "' x2='" << kLeft << "' y2='" << sy
        << "' stroke='#444'/>\n"
        << "<text x='" << kLeft - 9 << "' y='" << sy + 4
        << "' text-anchor='end' font-size='12' font-family='sans-serif'>"
        << detail::tick_label(vy) << "</text>\n";
  }
  svg << "<text x='" << kLeft + plot_w / 2 << "' y='" << kHeight - 16
      << "' text-anchor='middle' font-size='14' font-family='sans-serif'>" << chart.xlabel
      << "</text>\n"
      << "<text x='20' y='" << kTop + plot_h / 2
      << "' text-anchor='middle' font-size='14' font-family='sans-serif' transform='rotate(-90 20 "
      << kTop + plot_h / 2 << ")'>" << chart.ylabel << "</text>\n";

  for (const auto& s : chart.series) {
    if (s.xs.empty()) continue;
    svg << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.8' points='";
    for (std::size_t k = 0; k < s.xs.size(); ++k)
      svg << detail::num(px(s.xs[k])) << "," << detail::num(py(s.ys[k])) << " ";
    svg << "'/>\n";
    if (s.markers) {
      for (std::size_t k = 0; k < s.xs.size(); ++k)
        svg << "<circle cx='" << detail::num(px(s.xs[k])) << "' cy='" << detail::num(py(s.ys[k]))
            << "' r='3' fill='" << s.color << "'/>\n";
    }
  }

  double ly = kTop + 12;
  for (const auto& s : chart.series) {
    svg << "<line x1='" << kLeft + plot_w - 150 << "' y1='" << ly << "' x2='"
        << kLeft + plot_w - 126 << "' y2='" << ly << "' stroke='" << s.color
        << "' stroke-width='2'/>\n"
        << "<text x='" << kLeft + plot_w - 120 << "' y='" << ly + 4
        << "' font-size='12' font-family='sans-serif'>" << s.label << "</text>\n";
    ly += 18;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace levyrbm::plot
