#include "netspread/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace netspread {

MercatorPoint web_mercator(double lon_deg, double lat_deg) {
  MercatorPoint p;
  if (std::abs(lat_deg) > kWebMercatorMaxLat) {
    lat_deg = std::clamp(lat_deg, -kWebMercatorMaxLat, kWebMercatorMaxLat);
    p.clamped = true;
  }
  constexpr double kDeg = std::numbers::pi / 180.0;
  p.x = kWebMercatorRadius * lon_deg * kDeg;
  p.y = kWebMercatorRadius * std::log(std::tan(std::numbers::pi / 4.0 + lat_deg * kDeg / 2.0));
  return p;
}

}  // namespace netspread
