#include "netspread/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "netspread/errors.hpp"
#include "netspread/stats.hpp"

namespace netspread {

namespace {

double trapezoid(double x0, double y0, double x1, double y1) { return 0.5 * (y0 + y1) * (x1 - x0); }

double interpolate(const DensityCurve& c, std::size_t i, double x) {
  const double t = (x - c.grid[i]) / (c.grid[i + 1] - c.grid[i]);
  return c.density[i] + t * (c.density[i + 1] - c.density[i]);
}

}  // namespace

double silverman_bandwidth(std::span<const double> samples) {
  if (samples.size() < 2) throw AnalysisError("bandwidth needs at least 2 samples");
  const double sd = stats::sample_sd(samples);
  if (!(sd > 0.0)) throw AnalysisError("constant sample: zero bandwidth");
  const double iqr = stats::quantile(samples, 0.75) - stats::quantile(samples, 0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  return 0.9 * spread * std::pow(static_cast<double>(samples.size()), -0.2);
}

double kde_at(std::span<const double> samples, double bandwidth, double x) {
  const double norm = 1.0 / (static_cast<double>(samples.size()) * bandwidth * std::sqrt(2.0 * std::numbers::pi));
  double sum = 0.0;
  for (double xi : samples) {
    const double u = (x - xi) / bandwidth;
    sum += std::exp(-0.5 * u * u);
  }
  return norm * sum;
}

DensityCurve kde_estimate(std::span<const double> samples, std::optional<double> bandwidth, std::size_t points) {
  if (samples.empty()) throw AnalysisError("kernel density of an empty sample");
  if (points < 2) throw AnalysisError("density grid needs at least 2 points");
  for (double x : samples) {
    if (!std::isfinite(x)) throw AnalysisError("kernel density sample contains a non-finite value");
  }
  const double h = bandwidth ? *bandwidth : silverman_bandwidth(samples);
  if (!(h > 0.0) || !std::isfinite(h)) throw AnalysisError("bandwidth must be positive");

  DensityCurve c;
  c.bandwidth = h;
  c.n = samples.size();
  const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
  c.data_min = *mn;
  c.data_max = *mx;
  const double lo = c.data_min - 4.0 * h;
  const double hi = c.data_max + 4.0 * h;
  c.spacing = (hi - lo) / static_cast<double>(points - 1);
  c.grid.resize(points);
  c.density.resize(points);
  for (std::size_t i = 0; i < points; ++i) {
    c.grid[i] = i + 1 == points ? hi : lo + static_cast<double>(i) * c.spacing;
    c.density[i] = kde_at(samples, h, c.grid[i]);
  }
  return c;
}

StageCut find_stage_cut(const DensityCurve& curve) {
  const auto& d = curve.density;
  const std::size_t n = d.size();
  if (n < 3) throw AnalysisError("no two-stage structure detected: density grid too short");

  std::vector<double> s(n);
  s[0] = (3.0 * d[0] + d[1]) / 4.0;
  s[n - 1] = (d[n - 2] + 3.0 * d[n - 1]) / 4.0;
  for (std::size_t i = 1; i + 1 < n; ++i) s[i] = (d[i - 1] + 2.0 * d[i] + d[i + 1]) / 4.0;

  const double global = *std::max_element(s.begin(), s.end());
  struct Mode {
    std::size_t index;
    double height;
  };
  std::vector<Mode> modes;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(s[i] > s[i - 1] && s[i] >= s[i + 1])) continue;
    // Topographic prominence: drop to the lowest point before a higher peak.
    double left_min = s[i];
    for (std::size_t j = i; j-- > 0;) {
      if (s[j] > s[i]) break;
      left_min = std::min(left_min, s[j]);
    }
    double right_min = s[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (s[j] > s[i]) break;
      right_min = std::min(right_min, s[j]);
    }
    const double prominence = s[i] - std::max(left_min, right_min);
    if (prominence >= kMinModeProminence * global) modes.push_back({i, s[i]});
  }
  if (modes.size() < 2) {
    throw AnalysisError("no two-stage structure detected: density curve has a single mode");
  }
  std::stable_sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) { return a.height > b.height; });
  const std::size_t left = std::min(modes[0].index, modes[1].index);
  const std::size_t right = std::max(modes[0].index, modes[1].index);

  std::size_t valley = left + 1;
  for (std::size_t i = left + 1; i < right; ++i) {
    if (d[i] < d[valley]) valley = i;
  }
  StageCut cut;
  cut.index = valley;
  cut.cut = curve.grid[valley];
  cut.resolution = curve.spacing;
  cut.left_peak = curve.grid[left];
  cut.right_peak = curve.grid[right];
  return cut;
}

double mass_between(const DensityCurve& curve, double a, double b) {
  if (!(a < b)) throw AnalysisError("mass_between needs a < b");
  const auto& g = curve.grid;
  if (g.size() < 2) return 0.0;
  const double lo = std::max(a, g.front());
  const double hi = std::min(b, g.back());
  if (!(lo < hi)) return 0.0;

  double mass = 0.0;
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    const double x0 = std::max(lo, g[i]);
    const double x1 = std::min(hi, g[i + 1]);
    if (!(x0 < x1)) continue;
    mass += trapezoid(x0, interpolate(curve, i, x0), x1, interpolate(curve, i, x1));
  }
  return std::clamp(mass, 0.0, 1.0);
}

double total_mass(const DensityCurve& curve) {
  double mass = 0.0;
  for (std::size_t i = 0; i + 1 < curve.grid.size(); ++i) {
    mass += trapezoid(curve.grid[i], curve.density[i], curve.grid[i + 1], curve.density[i + 1]);
  }
  return mass;
}

}  // namespace netspread
