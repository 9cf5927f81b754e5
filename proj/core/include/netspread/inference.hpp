#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "netspread/variables.hpp"

namespace netspread {

/// (v - min) / (max - min). Throws AnalysisError for a constant or empty vector.
std::vector<double> min_max_standardize(std::span<const double> values);
/// Missing cells pass through; min and max come from the present ones.
std::vector<Cell> min_max_standardize(std::span<const Cell> values);

/// Tukey boxplot summary with R-7 quartiles.
struct BoxStats {
  std::size_t n = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
  double whisker_lo = 0.0;  // most extreme datum >= q1 - 1.5 IQR
  double whisker_hi = 0.0;  // most extreme datum <= q3 + 1.5 IQR
  std::size_t within = 0;   // points inside the whiskers
  std::vector<double> outliers;  // ascending
};

/// Throws std::invalid_argument on an empty sample.
BoxStats box_stats(std::span<const double> values);

enum class VarianceModel { Welch, Pooled };

std::string_view to_string(VarianceModel model);

struct MeanDiffResult {
  std::string variable;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  double mean_a = 0.0;
  double mean_b = 0.0;
  double diff = 0.0;  // mean_a - mean_b
  double se = 0.0;
  double df = 0.0;    // NaN when both groups have zero variance
  double t_stat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  bool significant = false;  // the interval excludes zero
};

/// Two-sided (1 - alpha) interval for mean(a) - mean(b). Welch by default.
/// When both groups have zero variance the interval collapses to the
/// difference. Throws AnalysisError if either group has fewer than 2 values
/// or alpha is outside (0, 1).
MeanDiffResult mean_diff_ci(std::span<const double> group_a, std::span<const double> group_b, double alpha = 0.05,
                            VarianceModel model = VarianceModel::Welch);

struct BatteryOptions {
  double alpha = 0.05;
  VarianceModel variance = VarianceModel::Welch;
  /// Standardize each stage group separately instead of the pooled column.
  bool split_then_standardize = false;
};

struct BatteryEntry {
  std::string variable;
  VariableGroup group = VariableGroup::Extra;
  std::size_t n_a = 0;          // first stage (DFW <= cut)
  std::size_t n_b = 0;          // second stage (DFW > cut)
  std::size_t dropped_missing = 0;
  std::optional<MeanDiffResult> result;  // empty when untestable
  std::string note;
};

/// Mean-difference interval of every non-DFW column between the first stage
/// (DFW <= cut) and the second (DFW > cut), on [0, 1]-standardized values.
/// Rows missing DFW or the column value are dropped per column. Columns with
/// fewer than 2 values in a group, or constant ones, are reported untestable.
/// Output is in canonical symbol order, extras alphabetical.
std::vector<BatteryEntry> stage_ttest_battery(const VariablesTable& table, double cut,
                                              const BatteryOptions& options = {});

/// variable,group,n_a,n_b,diff,ci_lo,ci_hi,significant
std::string write_battery_csv(std::span<const BatteryEntry> battery);

enum class QuadrantLabel { Q1, Q2, Q3, Q4 };

std::string_view to_string(QuadrantLabel label);

struct Quadrant {
  QuadrantLabel label = QuadrantLabel::Q1;
  double t_cut = 44.0;
  double k_cut = 15.0;
};

inline constexpr double kDefaultTimeCut = 44.0;
inline constexpr double kDefaultDegreeCut = 15.0;

/// Q1: t <= t_cut, k <= k_cut   Q2: t > t_cut, k <= k_cut
/// Q3: t > t_cut, k > k_cut     Q4: t <= t_cut, k > k_cut
Quadrant quadrant_classify(double t, double k, double t_cut = kDefaultTimeCut, double k_cut = kDefaultDegreeCut);

}  // namespace netspread
