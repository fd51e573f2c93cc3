#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hifb {

/// Locale-independent decimal rendering with 17 significant digits;
/// non-finite values render as "nan"/"inf"/"-inf".
std::string fmt17(double v);

/// Minimal line-plot SVG: fixed 800x500 viewbox, linear axes with ticks and a
/// legend. Each series is a polyline; NaNs break the line.
struct SvgSeries {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
};

void write_svg_plot(std::ostream& os, const std::string& title,
                    const std::vector<SvgSeries>& series);

/// Flat `key = value` config file with '#' comments. Unknown keys are kept;
/// nested names use dots (inner.grid_points). Returns key -> raw string.
std::vector<std::pair<std::string, std::string>> parse_flat_config(std::istream& is);

}  // namespace hifb
