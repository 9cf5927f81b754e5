#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace netspread {

/// Normal-kernel density evaluated on an equally spaced grid that spans
/// [min - 4h, max + 4h] of the sample.
struct DensityCurve {
  std::vector<double> grid;
  std::vector<double> density;
  double bandwidth = 0.0;
  std::size_t n = 0;
  double spacing = 0.0;
  double data_min = 0.0;
  double data_max = 0.0;
};

inline constexpr std::size_t kDefaultGridPoints = 100;

/// h = 0.9 * min(sd, IQR / 1.34) * n^(-1/5); falls back to sd when the IQR
/// is zero. Throws AnalysisError for n < 2 or a constant sample.
double silverman_bandwidth(std::span<const double> samples);

/// f(x) = 1/(n h) * sum K((x - x_i) / h), K the standard normal density.
double kde_at(std::span<const double> samples, double bandwidth, double x);

/// Throws AnalysisError for an empty sample, h <= 0 or fewer than 2 grid
/// points. Without an explicit h, silverman_bandwidth() errors propagate.
DensityCurve kde_estimate(std::span<const double> samples, std::optional<double> bandwidth = std::nullopt,
                          std::size_t points = kDefaultGridPoints);

struct StageCut {
  double cut = 0.0;          // grid x of the density valley
  double resolution = 0.0;   // grid spacing
  std::size_t index = 0;     // grid index of the cut
  double left_peak = 0.0;    // grid x of the lower-x mode
  double right_peak = 0.0;   // grid x of the higher-x mode
};

/// Relative prominence a smoothed local maximum needs to count as a mode.
inline constexpr double kMinModeProminence = 0.25;

/// Valley between the two highest modes of the density curve. The curve is
/// lightly smoothed ([1 2 1] / 4) to find modes; maxima whose prominence is
/// below kMinModeProminence of the global maximum are ignored. The cut is the
/// grid point of minimum (raw) density strictly between the two modes, ties
/// to the lower x. Throws AnalysisError when fewer than two modes remain.
StageCut find_stage_cut(const DensityCurve& curve);

/// Trapezoidal mass of the (piecewise linear) curve over [a, b] intersected
/// with the grid span, clamped to [0, 1]. Throws AnalysisError if a >= b.
double mass_between(const DensityCurve& curve, double a, double b);

/// Trapezoidal integral over the full grid.
double total_mass(const DensityCurve& curve);

}  // namespace netspread
