#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace frontier::io {

struct Series {
  std::string label;
  std::vector<double> x, y;
  std::string color;
  bool markers = false;  // dots instead of a polyline
};

struct PlotSpec {
  std::string title;
  std::string x_label = "x";
  std::string y_label;
  double width = 640, height = 400;
  std::vector<double> vlines;  // dashed vertical markers
};

namespace detail {

/// Fixed-precision formatting keeps the file byte-identical across runs.
inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

inline std::string line_plot(const PlotSpec& spec, const std::vector<Series>& series) {
  using detail::fmt;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool first = true;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (first) {
        x0 = x1 = s.x[i];
        y0 = y1 = s.y[i];
        first = false;
      }
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (x1 <= x0) x1 = x0 + 1;
  if (y1 <= y0) y1 = y0 + 1;
  y1 += 0.05 * (y1 - y0);

  const double ml = 60, mr = 20, mt = 36, mb = 48;
  const double pw = spec.width - ml - mr, ph = spec.height - mt - mb;
  auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return mt + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  std::string o;
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(spec.width) + "\" height=\"" +
       fmt(spec.height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o += "<text x=\"" + fmt(spec.width / 2) + "\" y=\"20\" text-anchor=\"middle\">" +
       detail::escape(spec.title) + "</text>\n";
  o += "<rect x=\"" + fmt(ml) + "\" y=\"" + fmt(mt) + "\" width=\"" + fmt(pw) + "\" height=\"" +
       fmt(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
    char lx[32], ly[32];
    std::snprintf(lx, sizeof lx, "%.3g", xv);
    std::snprintf(ly, sizeof ly, "%.3g", yv);
    o += "<text x=\"" + fmt(px(xv)) + "\" y=\"" + fmt(mt + ph + 16) +
         "\" text-anchor=\"middle\">" + lx + "</text>\n";
    o += "<text x=\"" + fmt(ml - 6) + "\" y=\"" + fmt(py(yv) + 4) + "\" text-anchor=\"end\">" + ly +
         "</text>\n";
  }
  o += "<text x=\"" + fmt(ml + pw / 2) + "\" y=\"" + fmt(spec.height - 8) +
       "\" text-anchor=\"middle\">" + detail::escape(spec.x_label) + "</text>\n";
  if (!spec.y_label.empty())
    o += "<text x=\"14\" y=\"" + fmt(mt + ph / 2) + "\" transform=\"rotate(-90 14 " +
         fmt(mt + ph / 2) + ")\" text-anchor=\"middle\">" + detail::escape(spec.y_label) +
         "</text>\n";
  for (double v : spec.vlines)
    o += "<line x1=\"" + fmt(px(v)) + "\" y1=\"" + fmt(mt) + "\" x2=\"" + fmt(px(v)) + "\" y2=\"" +
         fmt(mt + ph) + "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";

  double ly = mt + 14;
  for (const auto& s : series) {
    if (s.markers) {
      o += "<g fill=\"" + s.color + "\">\n";
      for (std::size_t i = 0; i < s.x.size(); ++i)
        o += "<circle cx=\"" + fmt(px(s.x[i])) + "\" cy=\"" + fmt(py(s.y[i])) + "\" r=\"1.2\"/>\n";
      o += "</g>\n";
    } else {
      o += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (i) o += ' ';
        o += fmt(px(s.x[i])) + ',' + fmt(py(s.y[i]));
      }
      o += "\"/>\n";
    }
    o += "<line x1=\"" + fmt(ml + pw - 110) + "\" y1=\"" + fmt(ly - 4) + "\" x2=\"" +
         fmt(ml + pw - 90) + "\" y2=\"" + fmt(ly - 4) + "\" stroke=\"" + s.color +
         "\" stroke-width=\"2\"/>\n";
    o += "<text x=\"" + fmt(ml + pw - 84) + "\" y=\"" + fmt(ly) + "\">" + detail::escape(s.label) +
         "</text>\n";
    ly += 16;
  }
  o += "</svg>\n";
  return o;
}

}  // namespace frontier::io
