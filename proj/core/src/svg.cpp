#include "easyfilter/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "easyfilter/errors.hpp"

namespace easyfilter {
namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 80, kRight = 20, kTop = 40, kBottom = 60;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
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

struct Range {
  double lo, hi;
  double span() const { return hi - lo; }
};

Range padded(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw DataError("cannot plot non-finite values");
  if (hi - lo < 1e-12) {
    const double pad = std::max(1.0, std::abs(lo) * 0.1);
    return {lo - pad, hi + pad};
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

std::string open_svg(const std::string& title) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
                  num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"16\">" + escape(title) + "</text>\n";
  return s;
}

std::string y_axis(const Range& y, const std::string& label) {
  const double plot_h = kHeight - kTop - kBottom;
  std::string s = "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) + "\" y2=\"" +
       num(kHeight - kBottom) + "\"/>\n";
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kHeight - kBottom) + "\" x2=\"" + num(kWidth - kRight) +
       "\" y2=\"" + num(kHeight - kBottom) + "\"/>\n</g>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = y.lo + y.span() * i / 4.0;
    const double py = kHeight - kBottom - plot_h * i / 4.0;
    s += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(py + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + tick(v) + "</text>\n";
  }
  s += "<text x=\"18\" y=\"" + num(kTop + plot_h / 2) + "\" transform=\"rotate(-90 18 " + num(kTop + plot_h / 2) +
       ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + escape(label) + "</text>\n";
  return s;
}

}  // namespace

std::string line_plot_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<Series>& series) {
  double lo = 0, hi = 0;
  std::size_t n = 1;
  for (const auto& se : series) {
    for (double v : se.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    n = std::max(n, se.values.size());
  }
  const Range y = padded(lo, hi);
  const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;
  auto px = [&](std::size_t i) { return kLeft + plot_w * (n == 1 ? 0.5 : static_cast<double>(i) / (n - 1)); };
  auto py = [&](double v) { return kHeight - kBottom - plot_h * (v - y.lo) / y.span(); };

  std::string s = open_svg(title) + y_axis(y, y_label);
  s += "<text x=\"" + num(kLeft) + "\" y=\"" + num(kHeight - kBottom + 16) +
       "\" font-family=\"sans-serif\" font-size=\"11\">1</text>\n";
  s += "<text x=\"" + num(kWidth - kRight) + "\" y=\"" + num(kHeight - kBottom + 16) +
       "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + std::to_string(n) + "</text>\n";
  s += "<text x=\"" + num(kLeft + plot_w / 2) + "\" y=\"" + num(kHeight - 16) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + escape(x_label) + "</text>\n";
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(py(0)) + "\" x2=\"" + num(kWidth - kRight) + "\" y2=\"" +
       num(py(0)) + "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* colour = kPalette[k % std::size(kPalette)];
    s += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[k].values.size(); ++i) {
      if (i) s += ' ';
      s += num(px(i)) + "," + num(py(series[k].values[i]));
    }
    s += "\"><title>" + escape(series[k].label) + "</title></polyline>\n";
    s += "<text x=\"" + num(kLeft + 10) + "\" y=\"" + num(kTop + 14 + 14.0 * k) + "\" fill=\"" + colour +
         "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(series[k].label) + "</text>\n";
  }
  return s + "</svg>\n";
}

std::string boxplot_svg(const std::string& title, const std::string& y_label, const std::vector<BoxGroup>& groups) {
  double lo = 0, hi = 0;
  for (const auto& g : groups) {
    lo = std::min(lo, g.summary.min);
    hi = std::max(hi, g.summary.max);
  }
  const Range y = padded(lo, hi);
  const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;
  auto py = [&](double v) { return kHeight - kBottom - plot_h * (v - y.lo) / y.span(); };
  const double slot = plot_w / static_cast<double>(std::max<std::size_t>(groups.size(), 1));
  const double box_w = std::min(80.0, slot * 0.5);

  std::string s = open_svg(title) + y_axis(y, y_label);
  for (std::size_t k = 0; k < groups.size(); ++k) {
    const auto& m = groups[k].summary;
    const double cx = kLeft + slot * (k + 0.5);
    const char* colour = kPalette[k % std::size(kPalette)];
    s += "<g class=\"box\">\n";
    s += "<line x1=\"" + num(cx) + "\" y1=\"" + num(py(m.min)) + "\" x2=\"" + num(cx) + "\" y2=\"" + num(py(m.q1)) +
         "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + num(cx) + "\" y1=\"" + num(py(m.q3)) + "\" x2=\"" + num(cx) + "\" y2=\"" + num(py(m.max)) +
         "\" stroke=\"black\"/>\n";
    for (double w : {m.min, m.max}) {
      s += "<line x1=\"" + num(cx - box_w / 4) + "\" y1=\"" + num(py(w)) + "\" x2=\"" + num(cx + box_w / 4) +
           "\" y2=\"" + num(py(w)) + "\" stroke=\"black\"/>\n";
    }
    s += "<rect x=\"" + num(cx - box_w / 2) + "\" y=\"" + num(py(m.q3)) + "\" width=\"" + num(box_w) +
         "\" height=\"" + num(std::max(0.0, py(m.q1) - py(m.q3))) + "\" fill=\"" + colour +
         "\" fill-opacity=\"0.4\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + num(cx - box_w / 2) + "\" y1=\"" + num(py(m.median)) + "\" x2=\"" + num(cx + box_w / 2) +
         "\" y2=\"" + num(py(m.median)) + "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + num(cx) + "\" y=\"" + num(kHeight - kBottom + 18) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + escape(groups[k].label) +
         "</text>\n</g>\n";
  }
  return s + "</svg>\n";
}

}  // namespace easyfilter
