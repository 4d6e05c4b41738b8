#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace hyperpot {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
};

/// Polyline chart with markers and a legend. Points that are non-finite, or
/// nonpositive on a log axis, are skipped.
std::string render_line_plot(const std::vector<PlotSeries>& series, const PlotOptions& options);
void write_line_plot(const std::filesystem::path& path, const std::vector<PlotSeries>& series,
                     const PlotOptions& options);

}  // namespace hyperpot
