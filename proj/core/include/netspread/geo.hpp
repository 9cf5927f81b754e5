#pragma once

namespace netspread {

inline constexpr double kWebMercatorRadius = 6378137.0;
/// Latitude at which the projected world is square (y = pi * R).
inline constexpr double kWebMercatorMaxLat = 85.051128779806592;

struct MercatorPoint {
  double x = 0.0;  // metres
  double y = 0.0;  // metres
  bool clamped = false;  // latitude was outside +/-kWebMercatorMaxLat
};

/// Spherical Web Mercator (EPSG:3857) of a lon/lat pair in degrees.
MercatorPoint web_mercator(double lon_deg, double lat_deg);

}  // namespace netspread
