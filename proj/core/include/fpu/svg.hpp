#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace fpu {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label = "t";
  std::string y_label;
  int width = 900;
  int height = 420;
  /// Long series are thinned to at most this many vertices (keeping the
  /// minimum and maximum of every bucket so peaks survive).
  std::size_t max_points = 4000;
};

/// Static line plot: axes with ticks, one polyline per series, legend.
void write_svg_plot(std::ostream& out, const PlotSpec& spec, const std::vector<PlotSeries>& series);
void write_svg_plot(const std::filesystem::path& path, const PlotSpec& spec,
                    const std::vector<PlotSeries>& series);

}  // namespace fpu
