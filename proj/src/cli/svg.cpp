#include "astra/cli/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "astra/cli/table.hpp"

namespace astra::cli::svg {

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                              "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string text(double x, double y, const std::string& s, const char* anchor = "middle", const std::string& extra = "") {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + anchor + "\" font-size=\"12\"" + extra + ">" +
         escape(s) + "</text>\n";
}

std::string header(const std::string& title) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" +
         text(kWidth / 2, 22, title, "middle", " font-weight=\"bold\"");
}

struct Axis {
  double lo, hi;
  double map(double v, double from, double to) const { return hi == lo ? (from + to) / 2 : from + (v - lo) / (hi - lo) * (to - from); }
};

Axis padded(double lo, double hi) {
  if (lo == hi) return {lo - 1, hi + 1};
  const double pad = (hi - lo) * 0.05;
  return {lo - pad, hi + pad};
}

}  // namespace

std::string line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series, bool log2_x, const double* reference_y,
                       const std::string& reference_label) {
  double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
  const auto tx = [&](double x) { return log2_x ? std::log2(x) : x; };
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("svg series x/y lengths differ");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xlo = std::min(xlo, tx(s.x[i]));
      xhi = std::max(xhi, tx(s.x[i]));
      ylo = std::min(ylo, s.y[i]);
      yhi = std::max(yhi, s.y[i]);
    }
  }
  if (reference_y) {
    ylo = std::min(ylo, *reference_y);
    yhi = std::max(yhi, *reference_y);
  }
  if (xlo > xhi) xlo = xhi = ylo = yhi = 0;
  const Axis ax{xlo, xhi};
  const Axis ay = padded(ylo, yhi);
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;

  std::string out = header(title);
  out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x1) + "\" y2=\"" + num(y0) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0) + "\" y2=\"" + num(y1) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = ax.lo + (ax.hi - ax.lo) * i / 4.0;
    const double yv = ay.lo + (ay.hi - ay.lo) * i / 4.0;
    const double px = ax.map(xv, x0, x1), py = ay.map(yv, y0, y1);
    out += text(px, y0 + 16, fmt(log2_x ? std::exp2(xv) : xv));
    out += text(x0 - 6, py + 4, fmt(std::round(yv * 1000) / 1000), "end");
    out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(py) + "\" x2=\"" + num(x1) + "\" y2=\"" + num(py) +
           "\" stroke=\"#dddddd\"/>\n";
  }
  out += text((x0 + x1) / 2, kHeight - 10, x_label);
  out += text(16, (y0 + y1) / 2, y_label, "middle", " transform=\"rotate(-90 16 " + num((y0 + y1) / 2) + ")\"");

  if (reference_y) {
    const double py = ay.map(*reference_y, y0, y1);
    out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(py) + "\" x2=\"" + num(x1) + "\" y2=\"" + num(py) +
           "\" stroke=\"black\" stroke-dasharray=\"6 4\"/>\n";
    out += text(x1 - 4, py - 6, reference_label, "end");
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % kPalette.size()];
    std::string pts;
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      const double px = ax.map(tx(series[s].x[i]), x0, x1), py = ay.map(series[s].y[i], y0, y1);
      pts += num(px) + "," + num(py) + " ";
      out += "<circle cx=\"" + num(px) + "\" cy=\"" + num(py) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" points=\"" + pts + "\"/>\n";
    out += text(x0 + 12, y1 + 16 * (static_cast<double>(s) + 1), series[s].label, "start",
                " fill=\"" + std::string(color) + "\"");
  }
  return out + "</svg>\n";
}

std::string stacked_bar(const std::string& title, const std::vector<std::string>& labels, const std::vector<double>& values) {
  if (labels.size() != values.size()) throw std::invalid_argument("svg labels/values lengths differ");
  double total = 0.0;
  for (double v : values) {
    if (v < 0) throw std::invalid_argument("stacked bar parts must be non-negative");
    total += v;
  }
  std::string out = header(title);
  const double bar_x = 120, bar_w = 120, y0 = kHeight - kBottom, y1 = kTop;
  double y = y0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double share = total > 0 ? values[i] / total : 0.0;
    const double h = share * (y0 - y1);
    const char* color = kPalette[i % kPalette.size()];
    y -= h;
    out += "<rect x=\"" + num(bar_x) + "\" y=\"" + num(y) + "\" width=\"" + num(bar_w) + "\" height=\"" + num(h) +
           "\" fill=\"" + color + "\"/>\n";
    const double ly = kTop + 20 * static_cast<double>(i);
    out += "<rect x=\"300\" y=\"" + num(ly) + "\" width=\"12\" height=\"12\" fill=\"" + color + "\"/>\n";
    out += text(318, ly + 11, labels[i] + "  " + fmt(std::round(share * 10000) / 100) + "%", "start");
  }
  out += "<line x1=\"" + num(bar_x - 10) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(bar_x + bar_w + 10) + "\" y2=\"" +
         num(y0) + "\" stroke=\"black\"/>\n";
  out += text(bar_x + bar_w / 2, y0 + 18, "total " + fmt(total) + " J");
  return out + "</svg>\n";
}

}  // namespace astra::cli::svg
