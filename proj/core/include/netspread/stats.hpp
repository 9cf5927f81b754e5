#pragma once

#include <span>
#include <string_view>

namespace netspread::stats {

/// Quantile rule used everywhere: linear interpolation of order statistics
/// (Hyndman-Fan type 7).
inline constexpr std::string_view kQuantileRule = "R-7 (linear interpolation of order statistics)";

double mean(std::span<const double> xs);
/// Unbiased (n - 1) sample variance; 0 when n < 2.
double sample_variance(std::span<const double> xs);
double sample_sd(std::span<const double> xs);
/// R-7 quantile of unsorted data, p in [0, 1]. Throws std::invalid_argument
/// on empty input.
double quantile(std::span<const double> xs, double p);
/// Same, for data already sorted ascending.
double quantile_sorted(std::span<const double> sorted, double p);

}  // namespace netspread::stats
