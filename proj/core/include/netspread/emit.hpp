#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "netspread/curvefit.hpp"
#include "netspread/inference.hpp"
#include "netspread/network.hpp"
#include "netspread/svg.hpp"

namespace netspread {

struct Rgb {
  int r = 0;
  int g = 0;
  int b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

std::string to_hex(Rgb color);

/// Continuous palette anchors (low, middle, high) and the two stage colours.
inline constexpr Rgb kPaletteLow{0xD7, 0x19, 0x1C};   // red: early
inline constexpr Rgb kPaletteMid{0xFF, 0xFF, 0xBF};   // yellow
inline constexpr Rgb kPaletteHigh{0x1A, 0x96, 0x41};  // green: late
inline constexpr Rgb kStageFirst = kPaletteLow;
inline constexpr Rgb kStageSecond = kPaletteHigh;
inline constexpr Rgb kNeutral{0xBD, 0xBD, 0xBD};

/// Piecewise-linear RGB interpolation red -> yellow -> green over [lo, hi];
/// a degenerate range maps to the low anchor.
Rgb continuous_color(double value, double lo, double hi);

enum class Palette { Continuous, Binary };

struct ChoroplethLayer {
  std::string title;
  std::string value_name;                  // property key, e.g. "DFW"
  Palette palette = Palette::Continuous;
  std::vector<std::optional<double>> values;  // per node id; empty -> neutral
  /// Binary palette: labels for value 0 and value 1.
  std::pair<std::string, std::string> categories{"First", "Second"};
};

struct MapFiles {
  std::string geojson;
  std::string svg;
};

/// GeoJSON FeatureCollection of capital points (lon/lat geometry, Web
/// Mercator coordinates and colour as properties) plus an SVG rendering on a
/// Mercator plate. Throws EmissionError if no node has a value or the value
/// vector does not match the node count.
MapFiles emit_choropleth(const FlowNetwork& net, const ChoroplethLayer& layer);

struct GroupBox {
  std::string label;
  BoxStats stats;
};

struct ScatterLayers {
  std::string title;
  std::string x_label = "x";
  std::string y_label = "y";
  std::vector<GroupBox> x_boxes;           // stacked above the plot (e.g. per continent)
  std::optional<BoxStats> y_box;           // right of the plot
  std::vector<std::pair<double, double>> group_means;  // drawn as '+'
  std::optional<FitResult> curve;          // sampled at kCurveSamples points
  std::optional<double> x_cut;             // dashed vertical line
  std::optional<double> y_cut;             // dashed horizontal line
};

inline constexpr int kCurveSamples = 200;

/// Geometry shared by the scatter emitter and its callers.
svg::PlotFrame scatter_frame(std::span<const double> x, std::span<const double> y, const ScatterLayers& layers);

/// Throws EmissionError when x and y differ in length.
std::string emit_scatter_with_layers(std::span<const double> x, std::span<const double> y,
                                     const ScatterLayers& layers);

/// One vertical bar per variable over [ci_lo, ci_hi], a dot at the
/// difference, and the zero line; significant labels in bold. Throws
/// EmissionError for an empty battery.
std::string emit_errorbar_chart(std::span<const MeanDiffResult> battery, std::string_view title = {});

/// Boxplots of `groups` side by side on a shared y axis, with an optional
/// fitted curve through the group positions.
std::string emit_boxplots(std::span<const GroupBox> groups, std::span<const double> positions,
                          std::string_view x_label, std::string_view y_label,
                          const std::optional<FitResult>& curve = std::nullopt);

}  // namespace netspread
