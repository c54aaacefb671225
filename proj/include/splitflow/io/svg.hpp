#pragma once

// Standalone SVG line plots with an optional base-10 logarithmic y axis.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "splitflow/core/error.hpp"
#include "splitflow/io/atomic_file.hpp"

namespace splitflow {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label = "iteration";
  std::string y_label = "residual";
  bool log_x = false;
  bool log_y = true;
  int width = 720;
  int height = 480;
};

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

/// Renders the series as one polyline each. Non-positive values are
/// skipped on logarithmic axes. Throws EmptySeries when there is nothing to draw.
inline std::string render_svg(const std::vector<PlotSeries>& series, const PlotSpec& spec) {
  if (series.empty()) throw EmptySeries("no series to plot");
  auto tx = [&](double v) { return spec.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return spec.log_y ? std::log10(v) : v; };
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!spec.log_x || x > 0.0) && (!spec.log_y || y > 0.0);
  };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    if (s.x.empty() || s.x.size() != s.y.size()) throw EmptySeries("series '" + s.label + "' is empty or ragged");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!(x1 >= x0) || !(y1 >= y0)) throw EmptySeries("no plottable points");
  if (spec.log_y) {
    y0 = std::floor(y0);
    y1 = std::max(std::ceil(y1), y0 + 1.0);
  }
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y1 = y0 + 1.0;

  const double left = 80, right = 170, top = 40, bottom = 60;
  const double pw = spec.width - left - right, ph = spec.height - top - bottom;
  auto px = [&](double v) { return left + (tx(v) - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return top + (1.0 - (ty(v) - y0) / (y1 - y0)) * ph; };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) + "\" height=\"" +
         std::to_string(spec.height) + "\" viewBox=\"0 0 " + std::to_string(spec.width) + " " +
         std::to_string(spec.height) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(spec.width) + "\" height=\"" + std::to_string(spec.height) +
         "\" fill=\"white\"/>\n";
  out += "<text x=\"" + detail::fmt(left) + "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">" +
         detail::escape_xml(spec.title) + "</text>\n";
  out += "<rect x=\"" + detail::fmt(left) + "\" y=\"" + detail::fmt(top) + "\" width=\"" + detail::fmt(pw) +
         "\" height=\"" + detail::fmt(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  if (spec.log_y) {
    for (int e = int(y0); e <= int(y1); ++e) {
      const double yy = top + (1.0 - (e - y0) / (y1 - y0)) * ph;
      out += "<line x1=\"" + detail::fmt(left) + "\" y1=\"" + detail::fmt(yy) + "\" x2=\"" + detail::fmt(left + pw) +
             "\" y2=\"" + detail::fmt(yy) + "\" stroke=\"#dddddd\"/>\n";
      out += "<text x=\"" + detail::fmt(left - 8) + "\" y=\"" + detail::fmt(yy + 4) +
             "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">1e" + std::to_string(e) + "</text>\n";
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", spec.log_x ? std::pow(10.0, x0) : x0);
  out += "<text x=\"" + detail::fmt(left) + "\" y=\"" + detail::fmt(top + ph + 18) +
         "\" font-family=\"sans-serif\" font-size=\"11\">" + buf + "</text>\n";
  std::snprintf(buf, sizeof buf, "%g", spec.log_x ? std::pow(10.0, x1) : x1);
  out += "<text x=\"" + detail::fmt(left + pw) + "\" y=\"" + detail::fmt(top + ph + 18) +
         "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" + buf + "</text>\n";
  out += "<text x=\"" + detail::fmt(left + pw / 2) + "\" y=\"" + detail::fmt(top + ph + 40) +
         "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" + detail::escape_xml(spec.x_label) +
         "</text>\n";
  out += "<text x=\"16\" y=\"" + detail::fmt(top + ph / 2) + "\" font-family=\"sans-serif\" font-size=\"12\" " +
         "text-anchor=\"middle\" transform=\"rotate(-90 16 " + detail::fmt(top + ph / 2) + ")\">" +
         detail::escape_xml(spec.y_label) + "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = colors[k % 6];
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      if (!first) out += ' ';
      out += detail::fmt(px(s.x[i])) + "," + detail::fmt(py(s.y[i]));
      first = false;
    }
    out += "\"/>\n";
    const double ly = top + 16 + 18.0 * double(k);
    out += "<line x1=\"" + detail::fmt(left + pw + 12) + "\" y1=\"" + detail::fmt(ly - 4) + "\" x2=\"" +
           detail::fmt(left + pw + 36) + "\" y2=\"" + detail::fmt(ly - 4) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + detail::fmt(left + pw + 42) + "\" y=\"" + detail::fmt(ly) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + detail::escape_xml(s.label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

inline void write_plot_svg(const std::vector<PlotSeries>& series, const PlotSpec& spec, const std::string& path) {
  write_file_atomic(path, render_svg(series, spec));
}

}  // namespace splitflow
