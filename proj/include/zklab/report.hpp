#pragma once

// Self-contained SVG renderer for the standard plots (quotient vs N, measure
// vs K, counterexample slopes).  Plots are a convenience; every check reads
// the CSVs, never these files.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "zklab/core.hpp"

namespace zklab {

struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
};

struct PlotSpec {
  std::string title;
  std::string x_label = "x";
  std::string y_label = "y";
  bool log2_x = false;
  bool log2_y = false;
  int width = 640;
  int height = 420;
};

namespace detail {

inline std::string svg_escape(const std::string& s) {
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

inline void render_svg_plot(const std::string& path, const PlotSpec& spec,
                            const std::vector<PlotSeries>& series) {
  static const char* colors[] = {"#1f6feb", "#d1242f", "#1a7f37",
                                 "#9a6700", "#8250df", "#bf3989"};
  const int W = spec.width, H = spec.height;
  const int ml = 64, mr = 16, mt = 36, mb = 46;

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  auto tx = [&](double v) { return spec.log2_x ? std::log2(v) : v; };
  auto ty = [&](double v) { return spec.log2_y ? std::log2(v) : v; };
  bool any = false;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if ((spec.log2_x && !(s.x[i] > 0.0)) || (spec.log2_y && !(s.y[i] > 0.0))) continue;
      xmin = std::min(xmin, tx(s.x[i]));
      xmax = std::max(xmax, tx(s.x[i]));
      ymin = std::min(ymin, ty(s.y[i]));
      ymax = std::max(ymax, ty(s.y[i]));
      any = true;
    }
  if (!any) {
    xmin = 0; xmax = 1; ymin = 0; ymax = 1;
  }
  if (xmax - xmin < 1e-12) { xmax += 0.5; xmin -= 0.5; }
  if (ymax - ymin < 1e-12) { ymax += 0.5; ymin -= 0.5; }

  auto px = [&](double v) {
    return ml + (tx(v) - xmin) / (xmax - xmin) * (W - ml - mr);
  };
  auto py = [&](double v) {
    return H - mb - (ty(v) - ymin) / (ymax - ymin) * (H - mt - mb);
  };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">"
    << detail::svg_escape(spec.title) << "</text>\n";

  // Axes and ticks (5 per axis, rendered in transformed coordinates).
  o << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
    << H - mb << "\" stroke=\"black\"/>\n"
    << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
    << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 4.0;
    const double fy = ymin + (ymax - ymin) * i / 4.0;
    const double gx = ml + (W - ml - mr) * i / 4.0;
    const double gy = H - mb - (H - mt - mb) * i / 4.0;
    char bx[32], by[32];
    std::snprintf(bx, sizeof bx, "%.3g", spec.log2_x ? std::exp2(fx) : fx);
    std::snprintf(by, sizeof by, "%.3g", spec.log2_y ? std::exp2(fy) : fy);
    o << "<text x=\"" << gx << "\" y=\"" << H - mb + 16
      << "\" text-anchor=\"middle\" font-size=\"11\">" << bx << "</text>\n"
      << "<text x=\"" << ml - 6 << "\" y=\"" << gy + 4
      << "\" text-anchor=\"end\" font-size=\"11\">" << by << "</text>\n"
      << "<line x1=\"" << gx << "\" y1=\"" << mt << "\" x2=\"" << gx << "\" y2=\"" << H - mb
      << "\" stroke=\"#eeeeee\"/>\n"
      << "<line x1=\"" << ml << "\" y1=\"" << gy << "\" x2=\"" << W - mr << "\" y2=\"" << gy
      << "\" stroke=\"#eeeeee\"/>\n";
  }
  o << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 10
    << "\" text-anchor=\"middle\" font-size=\"12\">" << detail::svg_escape(spec.x_label)
    << "</text>\n"
    << "<text x=\"14\" y=\"" << (mt + H - mb) / 2
    << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 "
    << (mt + H - mb) / 2 << ")\">" << detail::svg_escape(spec.y_label) << "</text>\n";

  int ci = 0;
  for (const auto& s : series) {
    const char* color = colors[ci % 6];
    std::ostringstream pts;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if ((spec.log2_x && !(s.x[i] > 0.0)) || (spec.log2_y && !(s.y[i] > 0.0))) continue;
      pts << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
      o << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\"3\" fill=\""
        << color << "\"/>\n";
    }
    o << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.5\"/>\n";
    o << "<text x=\"" << W - mr - 8 << "\" y=\"" << mt + 16 + 16 * ci
      << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << color << "\">"
      << detail::svg_escape(s.label) << "</text>\n";
    ++ci;
  }
  o << "</svg>\n";

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("plot: cannot open '" + path + "'");
  f << o.str();
}

// Minimal CSV reader for the report subcommand (header + numeric cells map).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    return -1;
  }
};

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("csv: cannot open '" + path + "'");
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        cells.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    cells.push_back(cur);
    if (first) {
      t.header = cells;
      first = false;
    } else {
      t.rows.push_back(cells);
    }
  }
  return t;
}

}  // namespace zklab
