#include "netspread/inference.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "netspread/csv.hpp"
#include "netspread/errors.hpp"
#include "netspread/stats.hpp"

namespace netspread {

std::vector<double> min_max_standardize(std::span<const double> values) {
  if (values.empty()) throw AnalysisError("cannot standardize an empty vector");
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  const double lo = *mn;
  const double range = *mx - lo;
  if (!(range > 0.0)) throw AnalysisError("cannot standardize a constant vector");
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - lo) / range;
  return out;
}

std::vector<Cell> min_max_standardize(std::span<const Cell> values) {
  std::vector<double> present;
  for (const auto& v : values) {
    if (v) present.push_back(*v);
  }
  const auto scaled = min_max_standardize(present);
  std::vector<Cell> out(values.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i]) out[i] = scaled[k++];
  }
  return out;
}

BoxStats box_stats(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("box_stats of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  BoxStats b;
  b.n = sorted.size();
  b.q1 = stats::quantile_sorted(sorted, 0.25);
  b.median = stats::quantile_sorted(sorted, 0.5);
  b.q3 = stats::quantile_sorted(sorted, 0.75);
  b.iqr = b.q3 - b.q1;
  const double lo_fence = b.q1 - 1.5 * b.iqr;
  const double hi_fence = b.q3 + 1.5 * b.iqr;
  b.whisker_lo = b.q1;
  b.whisker_hi = b.q3;
  bool any_within = false;
  for (double v : sorted) {
    if (v < lo_fence || v > hi_fence) {
      b.outliers.push_back(v);
      continue;
    }
    if (!any_within) b.whisker_lo = v;
    b.whisker_hi = v;
    any_within = true;
    ++b.within;
  }
  return b;
}

std::string_view to_string(VarianceModel model) {
  return model == VarianceModel::Welch ? "Welch unequal-variance t interval" : "pooled-variance t interval";
}

MeanDiffResult mean_diff_ci(std::span<const double> group_a, std::span<const double> group_b, double alpha,
                            VarianceModel model) {
  if (group_a.size() < 2 || group_b.size() < 2) {
    throw AnalysisError("mean difference needs at least 2 values per group (got " + std::to_string(group_a.size()) +
                        " and " + std::to_string(group_b.size()) + ")");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw AnalysisError("alpha must lie in (0, 1)");

  MeanDiffResult r;
  r.n_a = group_a.size();
  r.n_b = group_b.size();
  r.mean_a = stats::mean(group_a);
  r.mean_b = stats::mean(group_b);
  r.diff = r.mean_a - r.mean_b;
  const double na = static_cast<double>(r.n_a);
  const double nb = static_cast<double>(r.n_b);
  const double va = stats::sample_variance(group_a);
  const double vb = stats::sample_variance(group_b);

  if (model == VarianceModel::Welch) {
    const double qa = va / na;
    const double qb = vb / nb;
    r.se = std::sqrt(qa + qb);
    const double denom = qa * qa / (na - 1.0) + qb * qb / (nb - 1.0);
    r.df = denom > 0.0 ? (qa + qb) * (qa + qb) / denom : std::numeric_limits<double>::quiet_NaN();
  } else {
    const double pooled = ((na - 1.0) * va + (nb - 1.0) * vb) / (na + nb - 2.0);
    r.se = std::sqrt(pooled * (1.0 / na + 1.0 / nb));
    r.df = na + nb - 2.0;
  }

  if (r.se > 0.0) {
    const boost::math::students_t dist(r.df);
    const double t_crit = boost::math::quantile(boost::math::complement(dist, alpha / 2.0));
    r.t_stat = r.diff / r.se;
    r.ci_lo = r.diff - t_crit * r.se;
    r.ci_hi = r.diff + t_crit * r.se;
  } else {
    r.t_stat = r.diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), r.diff);
    r.ci_lo = r.diff;
    r.ci_hi = r.diff;
  }
  r.significant = r.ci_lo > 0.0 || r.ci_hi < 0.0;
  return r;
}

std::vector<BatteryEntry> stage_ttest_battery(const VariablesTable& table, double cut, const BatteryOptions& options) {
  const auto dfw = table.column(kDfw);

  std::vector<std::string> names;
  for (const auto& name : table.column_names()) {
    if (name != kDfw) names.push_back(name);
  }
  std::sort(names.begin(), names.end(),
            [](const std::string& a, const std::string& b) { return canonical_order_key(a) < canonical_order_key(b); });

  std::vector<BatteryEntry> out;
  for (const auto& name : names) {
    BatteryEntry e;
    e.variable = name;
    e.group = group_of(name);
    const auto col = table.column(name);

    std::vector<double> values;
    std::vector<bool> first;
    for (std::size_t i = 0; i < col.size(); ++i) {
      if (!dfw[i] || !col[i]) {
        ++e.dropped_missing;
        continue;
      }
      values.push_back(*col[i]);
      first.push_back(*dfw[i] <= cut);
    }

    std::vector<double> a;
    std::vector<double> b;
    for (std::size_t i = 0; i < values.size(); ++i) (first[i] ? a : b).push_back(values[i]);
    e.n_a = a.size();
    e.n_b = b.size();
    if (a.size() < 2 || b.size() < 2) {
      e.note = "untestable: fewer than 2 values in a stage group";
      out.push_back(std::move(e));
      continue;
    }
    try {
      if (options.split_then_standardize) {
        a = min_max_standardize(a);
        b = min_max_standardize(b);
      } else {
        const auto scaled = min_max_standardize(values);
        a.clear();
        b.clear();
        for (std::size_t i = 0; i < scaled.size(); ++i) (first[i] ? a : b).push_back(scaled[i]);
      }
    } catch (const AnalysisError&) {
      e.note = "untestable: constant values";
      out.push_back(std::move(e));
      continue;
    }
    e.result = mean_diff_ci(a, b, options.alpha, options.variance);
    e.result->variable = name;
    out.push_back(std::move(e));
  }
  return out;
}

std::string write_battery_csv(std::span<const BatteryEntry> battery) {
  std::string out = csv::join_row({"variable", "group", "n_a", "n_b", "diff", "ci_lo", "ci_hi", "significant"});
  for (const auto& e : battery) {
    std::vector<std::string> row{e.variable, std::string(to_string(e.group)), std::to_string(e.n_a),
                                 std::to_string(e.n_b)};
    if (e.result) {
      row.push_back(csv::format_number(e.result->diff));
      row.push_back(csv::format_number(e.result->ci_lo));
      row.push_back(csv::format_number(e.result->ci_hi));
      row.push_back(e.result->significant ? "true" : "false");
    } else {
      row.insert(row.end(), {"", "", "", "NA"});
    }
    out += csv::join_row(row);
  }
  return out;
}

std::string_view to_string(QuadrantLabel label) {
  switch (label) {
    case QuadrantLabel::Q1: return "Q1";
    case QuadrantLabel::Q2: return "Q2";
    case QuadrantLabel::Q3: return "Q3";
    case QuadrantLabel::Q4: return "Q4";
  }
  return "?";
}

Quadrant quadrant_classify(double t, double k, double t_cut, double k_cut) {
  Quadrant q;
  q.t_cut = t_cut;
  q.k_cut = k_cut;
  const bool early = t <= t_cut;
  const bool hub = k > k_cut;
  if (early) q.label = hub ? QuadrantLabel::Q4 : QuadrantLabel::Q1;
  else q.label = hub ? QuadrantLabel::Q3 : QuadrantLabel::Q2;
  return q;
}

}  // namespace netspread
