#pragma once

// Minimal SVG figures: line charts on a fixed plot box and a bar chart with
// a horizontal reference line.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "ccx/common.hpp"

namespace ccx::svg {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool dashed = false;
};

struct Axes {
  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  std::string title;
  std::string x_label;
  std::string y_label;
};

namespace detail {
constexpr double kWidth = 480, kHeight = 400, kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;

inline std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

inline std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

struct Frame {
  Axes a;
  double px(double x) const { return kLeft + (x - a.x_min) / (a.x_max - a.x_min) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - a.y_min) / (a.y_max - a.y_min) * (kHeight - kTop - kBottom); }
};

inline void open(std::ostringstream& s, const Frame& f) {
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n"
    << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n"
    << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(f.a.title) << "</text>\n"
    << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight << "\" height=\""
    << kHeight - kTop - kBottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = f.a.x_min + (f.a.x_max - f.a.x_min) * i / 4.0;
    const double yv = f.a.y_min + (f.a.y_max - f.a.y_min) * i / 4.0;
    s << "<text x=\"" << num(f.px(xv)) << "\" y=\"" << kHeight - kBottom + 16 << "\" text-anchor=\"middle\" font-size=\"10\">"
      << num(xv) << "</text>\n"
      << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(f.py(yv) + 3) << "\" text-anchor=\"end\" font-size=\"10\">" << num(yv)
      << "</text>\n";
  }
  s << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\" font-size=\"12\">"
    << escape(f.a.x_label) << "</text>\n"
    << "<text x=\"14\" y=\"" << kHeight / 2 << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 "
    << kHeight / 2 << ")\">" << escape(f.a.y_label) << "</text>\n";
}
}  // namespace detail

inline std::string line_chart(const Axes& axes, const std::vector<Series>& series) {
  const detail::Frame f{axes};
  std::ostringstream s;
  detail::open(s, f);
  double legend_y = detail::kTop + 14;
  for (const auto& ser : series) {
    s << "<polyline fill=\"none\" stroke=\"" << ser.color << "\" stroke-width=\"1.5\"";
    if (ser.dashed) s << " stroke-dasharray=\"5,4\"";
    s << " points=\"";
    for (std::size_t i = 0; i < ser.x.size(); ++i) {
      if (std::isnan(ser.y[i])) continue;
      s << detail::num(f.px(ser.x[i])) << ',' << detail::num(f.py(ser.y[i])) << ' ';
    }
    s << "\"><title>" << detail::escape(ser.name) << "</title></polyline>\n";
    s << "<text x=\"" << detail::kLeft + 8 << "\" y=\"" << legend_y << "\" font-size=\"11\" fill=\"" << ser.color << "\">"
      << detail::escape(ser.name) << "</text>\n";
    legend_y += 14;
  }
  s << "</svg>\n";
  return s.str();
}

// Dual-transformation curve against the identity line.
inline std::string dual_curve_chart(const std::string& title, const std::vector<double>& x, const std::vector<double>& fx,
                                    double auc) {
  Series identity{"identity (AUC 0.5)", {0.0, 1.0}, {0.0, 1.0}, "#d62728", true};
  Series curve{"dual transform (AUC " + detail::num(auc) + ")", x, fx, "#1f77b4", false};
  return line_chart({0, 1, 0, 1, title, "benchmark score", "target score"}, {identity, curve});
}

struct Bar {
  std::string label;
  double value = 0;
};

inline std::string bar_chart(const std::string& title, const std::vector<Bar>& bars, double reference, double y_max = 1.0) {
  const detail::Frame f{{0, static_cast<double>(std::max<std::size_t>(bars.size(), 1)), 0, y_max, title, "", "AUC"}};
  std::ostringstream s;
  detail::open(s, f);
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double x0 = f.px(static_cast<double>(i) + 0.15), x1 = f.px(static_cast<double>(i) + 0.85);
    const double y0 = f.py(std::clamp(bars[i].value, 0.0, y_max)), y1 = f.py(0);
    s << "<rect x=\"" << detail::num(x0) << "\" y=\"" << detail::num(y0) << "\" width=\"" << detail::num(x1 - x0)
      << "\" height=\"" << detail::num(y1 - y0) << "\" fill=\"#1f77b4\"><title>" << detail::escape(bars[i].label) << "</title></rect>\n"
      << "<text x=\"" << detail::num((x0 + x1) / 2) << "\" y=\"" << detail::num(y0 - 4)
      << "\" text-anchor=\"middle\" font-size=\"10\">" << detail::escape(bars[i].label) << "</text>\n";
  }
  s << "<line x1=\"" << detail::kLeft << "\" x2=\"" << detail::kWidth - detail::kRight << "\" y1=\"" << detail::num(f.py(reference))
    << "\" y2=\"" << detail::num(f.py(reference)) << "\" stroke=\"#d62728\" stroke-dasharray=\"5,4\"/>\n</svg>\n";
  return s.str();
}

inline void save(const std::string& path, const std::string& svg) {
  auto out = open_output(path);
  out << svg;
  if (!out) fail_usage("write failed: " + path);
}

}  // namespace ccx::svg
