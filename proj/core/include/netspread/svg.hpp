#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace netspread::svg {

/// Version string embedded in every generated SVG.
std::string_view generator();

/// Coordinates are written with two decimals so output is deterministic.
std::string fmt(double v);

/// XML-escapes text content and attribute values.
std::string escape(std::string_view text);

/// Linear data-to-pixel mapping for a rectangular plot area (y grows upward
/// in data space, downward in pixels).
struct PlotFrame {
  double left = 0.0;
  double top = 0.0;
  double width = 0.0;
  double height = 0.0;
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;

  double px(double x) const;
  double py(double y) const;
};

/// Pads a data range by `fraction` on each side; degenerate ranges widen to +/-1.
std::pair<double, double> padded_range(double lo, double hi, double fraction = 0.05);

/// "Nice" tick positions covering [lo, hi].
std::vector<double> ticks(double lo, double hi, int target = 6);

/// Shortest label for a tick value.
std::string tick_label(double v);

class Document {
 public:
  Document(double width, double height);

  void raw(std::string_view element);
  void rect(double x, double y, double w, double h, std::string_view attrs);
  void line(double x1, double y1, double x2, double y2, std::string_view attrs);
  void circle(double cx, double cy, double r, std::string_view attrs);
  void polyline(const std::vector<std::pair<double, double>>& points, std::string_view attrs);
  void text(double x, double y, std::string_view content, std::string_view attrs);
  void open_group(std::string_view attrs);
  void close_group();

  /// Axes with ticks and labels around `frame`.
  void axes(const PlotFrame& frame, std::string_view x_label, std::string_view y_label);

  std::string str() const;

 private:
  double width_;
  double height_;
  std::string body_;
};

}  // namespace netspread::svg
