// Copyright 2026 The geogate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "geogate/core.hpp"
#include "geogate/output.hpp"

namespace geogate {

namespace svg {

inline constexpr double kWidth = 560.0;
inline constexpr double kHeight = 420.0;
inline constexpr double kLeft = 80.0;
inline constexpr double kRight = 30.0;
inline constexpr double kTop = 30.0;
inline constexpr double kBottom = 60.0;

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
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

struct Frame {
  double x0, x1, y0, y1;

  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

inline std::string header() {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

inline std::string axes(const Frame& f, const std::string& xl, const std::string& yl) {
  std::string s;
  s += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(kWidth - kLeft - kRight) + "\" height=\"" +
       num(kHeight - kTop - kBottom) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double x = f.x0 + (f.x1 - f.x0) * k / 4.0;
    const double y = f.y0 + (f.y1 - f.y0) * k / 4.0;
    s += "<text x=\"" + num(f.px(x)) + "\" y=\"" + num(kHeight - kBottom + 16) + "\" text-anchor=\"middle\">" +
         format_number(std::round(x * 1e6) / 1e6) + "</text>\n";
    s += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(f.py(y) + 4) + "\" text-anchor=\"end\">" +
         format_number(std::round(y * 1e6) / 1e6) + "</text>\n";
  }
  s += "<text x=\"" + num((kLeft + kWidth - kRight) / 2) + "\" y=\"" + num(kHeight - 20) + "\" text-anchor=\"middle\">" +
       escape(xl) + "</text>\n";
  s += "<text x=\"16\" y=\"" + num((kTop + kHeight - kBottom) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
       num((kTop + kHeight - kBottom) / 2) + ")\">" + escape(yl) + "</text>\n";
  return s;
}

inline std::array<int, 3> viridis_like(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(255 * (0.27 + t * (0.72 * t))));
  const int g = static_cast<int>(std::lround(255 * (0.0 + 0.87 * t)));
  const int b = static_cast<int>(std::lround(255 * (0.33 + 0.25 * std::sin(kPi * t) - 0.2 * t)));
  return {std::clamp(r, 0, 255), std::clamp(g, 0, 255), std::clamp(b, 0, 255)};
}

}  // namespace svg

inline std::string line_plot_svg(const LinePlot& plot) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : plot.series) {
    for (double x : s.x) x0 = std::min(x0, x), x1 = std::max(x1, x);
    for (double y : s.y) y0 = std::min(y0, y), y1 = std::max(y1, y);
  }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) y1 = y0 + 1e-6;
  const double pad = 0.05 * (y1 - y0);
  const svg::Frame f{x0, x1, y0 - pad, y1 + pad};
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::string s = svg::header() + svg::axes(f, plot.x_label, plot.y_label);
  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const auto& ser = plot.series[k];
    const char* c = colors[k % 6];
    std::string pts;
    for (std::size_t i = 0; i < ser.x.size(); ++i) pts += svg::num(f.px(ser.x[i])) + "," + svg::num(f.py(ser.y[i])) + " ";
    s += "<polyline fill=\"none\" stroke=\"" + std::string(c) + "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
    for (std::size_t i = 0; i < ser.x.size(); ++i) {
      s += "<circle cx=\"" + svg::num(f.px(ser.x[i])) + "\" cy=\"" + svg::num(f.py(ser.y[i])) + "\" r=\"3\" fill=\"" + c + "\"/>\n";
    }
    s += "<text x=\"" + svg::num(svg::kLeft + 10) + "\" y=\"" + svg::num(svg::kTop + 16 + 16 * k) + "\" fill=\"" + c + "\">" +
         svg::escape(ser.label) + "</text>\n";
  }
  return s + "</svg>\n";
}

/// Heat map with iso-lines (marching squares) at five evenly spaced levels.
inline std::string heatmap_svg(const Grid& g) {
  const auto n1 = static_cast<Eigen::Index>(g.axis1.size());
  const auto n2 = static_cast<Eigen::Index>(g.axis2.size());
  if (n1 < 2 || n2 < 2) throw InvalidArgument("heatmap_svg: need at least a 2 x 2 grid");
  const double vmin = g.values.minCoeff(), vmax = g.values.maxCoeff();
  const double span = vmax > vmin ? vmax - vmin : 1.0;
  const svg::Frame f{g.axis1.front(), g.axis1.back(), g.axis2.front(), g.axis2.back()};
  std::string s = svg::header();
  const double dx = (g.axis1.back() - g.axis1.front()) / (n1 - 1);
  const double dy = (g.axis2.back() - g.axis2.front()) / (n2 - 1);
  for (Eigen::Index i = 0; i < n1; ++i) {
    for (Eigen::Index j = 0; j < n2; ++j) {
      const auto c = svg::viridis_like((g.values(i, j) - vmin) / span);
      const double xa = std::max(f.x0, g.axis1[i] - dx / 2), xb = std::min(f.x1, g.axis1[i] + dx / 2);
      const double ya = std::max(f.y0, g.axis2[j] - dy / 2), yb = std::min(f.y1, g.axis2[j] + dy / 2);
      s += "<rect x=\"" + svg::num(f.px(xa)) + "\" y=\"" + svg::num(f.py(yb)) + "\" width=\"" +
           svg::num(f.px(xb) - f.px(xa) + 0.5) + "\" height=\"" + svg::num(f.py(ya) - f.py(yb) + 0.5) + "\" fill=\"rgb(" +
           std::to_string(c[0]) + "," + std::to_string(c[1]) + "," + std::to_string(c[2]) + ")\"/>\n";
    }
  }
  for (int l = 1; l <= 5; ++l) {
    const double level = vmin + span * l / 6.0;
    std::string path;
    for (Eigen::Index i = 0; i + 1 < n1; ++i) {
      for (Eigen::Index j = 0; j + 1 < n2; ++j) {
        // Corners counter-clockwise from (i, j); collect edge crossings.
        const std::array<std::pair<Eigen::Index, Eigen::Index>, 4> c{{{i, j}, {i + 1, j}, {i + 1, j + 1}, {i, j + 1}}};
        std::vector<std::pair<double, double>> hits;
        for (int e = 0; e < 4; ++e) {
          const auto [ai, aj] = c[e];
          const auto [bi, bj] = c[(e + 1) % 4];
          const double va = g.values(ai, aj) - level, vb = g.values(bi, bj) - level;
          if ((va < 0.0) == (vb < 0.0)) continue;
          const double t = va / (va - vb);
          hits.emplace_back(g.axis1[ai] + t * (g.axis1[bi] - g.axis1[ai]), g.axis2[aj] + t * (g.axis2[bj] - g.axis2[aj]));
        }
        for (std::size_t h = 0; h + 1 < hits.size(); h += 2) {
          path += "M" + svg::num(f.px(hits[h].first)) + " " + svg::num(f.py(hits[h].second)) + "L" +
                  svg::num(f.px(hits[h + 1].first)) + " " + svg::num(f.py(hits[h + 1].second));
        }
      }
    }
    if (!path.empty()) s += "<path d=\"" + path + "\" stroke=\"white\" stroke-width=\"1\" fill=\"none\"/>\n";
  }
  s += svg::axes(f, g.axis1_label, g.axis2_label);
  s += "<text x=\"" + svg::num(svg::kLeft) + "\" y=\"18\">" + svg::escape(g.name) + "  [" + format_number(vmin) + ", " +
       format_number(vmax) + "]</text>\n";
  return s + "</svg>\n";
}

/// Writes one SVG per two-dimensional grid and per line plot.
inline std::vector<std::filesystem::path> emit_plot(const ResultBundle& b, const std::filesystem::path& dir) {
  ensure_directory(dir);
  std::vector<std::filesystem::path> written;
  for (const auto& g : b.grids) {
    if (g.axis1.size() < 2 || g.axis2.size() < 2) continue;
    const auto p = dir / (b.scenario + "_" + g.name + ".svg");
    write_text(p, heatmap_svg(g));
    written.push_back(p);
  }
  for (const auto& lp : b.plots) {
    const auto p = dir / (b.scenario + "_" + lp.name + ".svg");
    write_text(p, line_plot_svg(lp));
    written.push_back(p);
  }
  return written;
}

}  // namespace geogate
