#include "slowlight/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "slowlight/errors.hpp"

namespace slowlight {

namespace {

constexpr const char* kPalette[] = {"#d62728", "#2ca02c", "#1f77b4", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#7f7f7f", "#17becf"};

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string coord(double v) { return fmt("%.2f", v); }

std::string tick_label(double v) {
  if (v == 0.0) return "0";
  const double a = std::abs(v);
  if (a >= 1e4 || a < 1e-3) return fmt("%.3g", v);
  return fmt("%.6g", v);
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::vector<double> nice_ticks(double lo, double hi, int target) {
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / std::max(1, target);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step)
    ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  return ticks;
}

std::string render_svg(const std::vector<Series>& series, const PlotSpec& spec) {
  if (series.empty()) throw InvalidArgument("render_svg: no series");
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series) {
    if (s.x.empty() || s.x.size() != s.y.size())
      throw InvalidArgument("render_svg: series '" + s.label + "' is empty or ragged");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]), xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]), ymax = std::max(ymax, s.y[i]);
    }
  }
  for (const auto& m : spec.markers) xmin = std::min(xmin, m.x), xmax = std::max(xmax, m.x);
  if (!std::isfinite(xmin)) throw InvalidArgument("render_svg: no finite points");
  if (xmax == xmin) xmin -= 0.5, xmax += 0.5;
  if (ymax == ymin) ymin -= 0.5, ymax += 0.5;
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad, ymax += ypad;

  const double left = 80, right = 20, top = 40, bottom = 60;
  const double pw = spec.width - left - right, ph = spec.height - top - bottom;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) +
         "\" height=\"" + std::to_string(spec.height) + "\" viewBox=\"0 0 " +
         std::to_string(spec.width) + " " + std::to_string(spec.height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!spec.title.empty())
    out += "<text x=\"" + coord(spec.width / 2.0) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
           escape(spec.title) + "</text>\n";
  out += "<rect x=\"" + coord(left) + "\" y=\"" + coord(top) + "\" width=\"" + coord(pw) +
         "\" height=\"" + coord(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double t : nice_ticks(xmin, xmax)) {
    const double x = px(t);
    out += "<line x1=\"" + coord(x) + "\" y1=\"" + coord(top + ph) + "\" x2=\"" + coord(x) + "\" y2=\"" +
           coord(top + ph + 5) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + coord(x) + "\" y=\"" + coord(top + ph + 18) +
           "\" text-anchor=\"middle\" font-size=\"11\">" + tick_label(t) + "</text>\n";
  }
  for (double t : nice_ticks(ymin, ymax)) {
    const double y = py(t);
    out += "<line x1=\"" + coord(left - 5) + "\" y1=\"" + coord(y) + "\" x2=\"" + coord(left) + "\" y2=\"" +
           coord(y) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + coord(left - 8) + "\" y=\"" + coord(y + 4) +
           "\" text-anchor=\"end\" font-size=\"11\">" + tick_label(t) + "</text>\n";
  }
  if (!spec.x_label.empty())
    out += "<text x=\"" + coord(left + pw / 2) + "\" y=\"" + coord(spec.height - 15.0) +
           "\" text-anchor=\"middle\" font-size=\"13\">" + escape(spec.x_label) + "</text>\n";
  if (!spec.y_label.empty())
    out += "<text x=\"18\" y=\"" + coord(top + ph / 2) + "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 " +
           coord(top + ph / 2) + ")\">" + escape(spec.y_label) + "</text>\n";
  if (ymin < 0.0 && ymax > 0.0)
    out += "<line x1=\"" + coord(left) + "\" y1=\"" + coord(py(0)) + "\" x2=\"" + coord(left + pw) +
           "\" y2=\"" + coord(py(0)) + "\" stroke=\"#cccccc\"/>\n";

  for (const auto& m : spec.markers) {
    out += "<line x1=\"" + coord(px(m.x)) + "\" y1=\"" + coord(top) + "\" x2=\"" + coord(px(m.x)) +
           "\" y2=\"" + coord(top + ph) + "\" stroke=\"black\" stroke-dasharray=\"6 4\"/>\n";
    if (!m.label.empty())
      out += "<text x=\"" + coord(px(m.x) - 4) + "\" y=\"" + coord(top + 14) +
             "\" text-anchor=\"end\" font-size=\"11\">" + escape(m.label) + "</text>\n";
  }

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = kPalette[k % std::size(kPalette)];
    out += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!first) out += ' ';
      out += coord(px(s.x[i])) + "," + coord(py(s.y[i]));
      first = false;
    }
    out += "\"/>\n";
    const double ly = top + 16 + 18.0 * static_cast<double>(k);
    const double lx = left + pw - 170;
    out += "<line x1=\"" + coord(lx) + "\" y1=\"" + coord(ly) + "\" x2=\"" + coord(lx + 24) + "\" y2=\"" +
           coord(ly) + "\" stroke=\"" + colour + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + coord(lx + 30) + "\" y=\"" + coord(ly + 4) + "\" font-size=\"11\">" +
           escape(s.label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace slowlight
