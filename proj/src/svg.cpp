#include "hyperpot/svg.hpp"

#include "hyperpot/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace hyperpot {

namespace {

constexpr double width = 640, height = 420;
constexpr double left = 70, right = 160, top = 40, bottom = 50;
const char* const palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

struct Axis {
  bool log;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
  double t(double v) const { return log ? std::log10(v) : v; }
  void add(double v) {
    if (!usable(v)) return;
    lo = std::min(lo, t(v));
    hi = std::max(hi, t(v));
  }
  void settle() {
    if (!(lo <= hi)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
  double frac(double v) const { return (t(v) - lo) / (hi - lo); }
  double tick(int k, int count) const {
    const double u = lo + (hi - lo) * k / count;
    return log ? std::pow(10.0, u) : u;
  }
};

}  // namespace

std::string render_line_plot(const std::vector<PlotSeries>& series, const PlotOptions& options) {
  Axis ax{options.log_x}, ay{options.log_y};
  for (const auto& s : series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
      if (ax.usable(s.x[i]) && ay.usable(s.y[i])) {
        ax.add(s.x[i]);
        ay.add(s.y[i]);
      }
  ax.settle();
  ay.settle();
  const double pw = width - left - right, ph = height - top - bottom;
  auto px = [&](double v) { return left + pw * ax.frac(v); };
  auto py = [&](double v) { return top + ph * (1.0 - ay.frac(v)); };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
                    num(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(width / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(options.title) + "</text>\n";
  svg += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  constexpr int ticks = 5;
  for (int k = 0; k <= ticks; ++k) {
    const double xv = ax.tick(k, ticks), yv = ay.tick(k, ticks);
    svg += "<text x=\"" + num(px(xv)) + "\" y=\"" + num(top + ph + 16) + "\" text-anchor=\"middle\">" +
           tick_label(xv) + "</text>\n";
    svg += "<text x=\"" + num(left - 6) + "\" y=\"" + num(py(yv) + 4) + "\" text-anchor=\"end\">" + tick_label(yv) +
           "</text>\n";
    svg += "<line x1=\"" + num(left) + "\" x2=\"" + num(left + pw) + "\" y1=\"" + num(py(yv)) + "\" y2=\"" +
           num(py(yv)) + "\" stroke=\"#ddd\"/>\n";
  }
  svg += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(height - 12) + "\" text-anchor=\"middle\">" +
         escape(options.x_label) + (options.log_x ? " (log)" : "") + "</text>\n";
  svg += "<text transform=\"translate(16," + num(top + ph / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
         escape(options.y_label) + (options.log_y ? " (log)" : "") + "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = palette[s % std::size(palette)];
    std::string points;
    std::string markers;
    const auto& ser = series[s];
    const std::size_t count = std::min(ser.x.size(), ser.y.size());
    for (std::size_t i = 0; i < count; ++i) {
      if (!ax.usable(ser.x[i]) || !ay.usable(ser.y[i])) continue;
      const std::string xy = num(px(ser.x[i])) + "," + num(py(ser.y[i]));
      points += xy + " ";
      if (count <= 64)
        markers += "<circle cx=\"" + num(px(ser.x[i])) + "\" cy=\"" + num(py(ser.y[i])) + "\" r=\"2.5\" fill=\"" +
                   color + "\"/>\n";
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" + points +
           "\"/>\n" + markers;
    const double ly = top + 14 + 16 * double(s);
    svg += "<line x1=\"" + num(left + pw + 10) + "\" x2=\"" + num(left + pw + 30) + "\" y1=\"" + num(ly) +
           "\" y2=\"" + num(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + num(left + pw + 34) + "\" y=\"" + num(ly + 4) + "\">" + escape(ser.name) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void write_line_plot(const std::filesystem::path& path, const std::vector<PlotSeries>& series,
                     const PlotOptions& options) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::config_error, "cannot write " + path.string());
  out << render_line_plot(series, options);
}

}  // namespace hyperpot
