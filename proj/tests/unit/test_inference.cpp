#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "netspread/errors.hpp"
#include "netspread/inference.hpp"
#include "netspread/stages.hpp"
#include "oracles.hpp"

namespace netspread {
namespace {

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double var_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / (v.size() - 1.0);
}

// ---- standardization ----

TEST(Standardize, Examples) {
  const std::vector<double> v{2.0, 4.0, 6.0};
  EXPECT_EQ(min_max_standardize(v), (std::vector<double>{0.0, 0.5, 1.0}));
  const std::vector<double> unit{0.0, 0.25, 1.0};
  EXPECT_EQ(min_max_standardize(unit), unit);
  const std::vector<double> constant{3.0, 3.0};
  EXPECT_THROW(min_max_standardize(constant), AnalysisError);
}

TEST(Standardize, MissingPassesThrough) {
  const std::vector<Cell> v{2.0, std::nullopt, 6.0};
  const auto s = min_max_standardize(v);
  EXPECT_EQ(s[0], 0.0);
  EXPECT_FALSE(s[1]);
  EXPECT_EQ(s[2], 1.0);
}

TEST(StandardizeProperty, FormulaAndOrder) {
  std::mt19937 rng(1);
  std::normal_distribution<double> z(5.0, 20.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(2 + rng() % 40);
    for (auto& x : v) x = z(rng);
    const auto s = min_max_standardize(v);
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    for (std::size_t i = 0; i < v.size(); ++i) {
      EXPECT_NEAR(s[i], (v[i] - *mn) / (*mx - *mn), 1e-12);
      for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[i] < v[j]) EXPECT_LT(s[i], s[j]);
      }
    }
  }
}

// ---- box stats ----

TEST(BoxStats, OneToNine) {
  std::vector<double> v(9);
  std::iota(v.begin(), v.end(), 1.0);
  const auto b = box_stats(v);
  EXPECT_EQ(b.median, 5.0);
  EXPECT_EQ(b.q1, 3.0);
  EXPECT_EQ(b.q3, 7.0);
  EXPECT_EQ(b.iqr, 4.0);
  EXPECT_TRUE(b.outliers.empty());
  EXPECT_EQ(b.whisker_lo, 1.0);
  EXPECT_EQ(b.whisker_hi, 9.0);
}

TEST(BoxStats, FarPointIsAnOutlier) {
  std::vector<double> v(9);
  std::iota(v.begin(), v.end(), 1.0);
  v.push_back(100.0);
  const auto b = box_stats(v);
  EXPECT_EQ(b.outliers, (std::vector<double>{100.0}));
  EXPECT_EQ(b.whisker_hi, 9.0);
}

TEST(BoxStats, SingleValue) {
  const std::vector<double> v{4.5};
  const auto b = box_stats(v);
  EXPECT_EQ(b.median, 4.5);
  EXPECT_EQ(b.q1, 4.5);
  EXPECT_EQ(b.q3, 4.5);
  EXPECT_TRUE(b.outliers.empty());
  EXPECT_THROW(box_stats(std::vector<double>{}), std::invalid_argument);
}

TEST(BoxStatsProperty, PartitionAndQuartileOrder) {
  std::mt19937 rng(2);
  std::lognormal_distribution<double> d(0.0, 1.5);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> v(1 + rng() % 60);
    for (auto& x : v) x = d(rng);
    const auto b = box_stats(v);
    EXPECT_EQ(b.within + b.outliers.size(), v.size());
    EXPECT_LE(b.q1, b.median);
    EXPECT_LE(b.median, b.q3);
    std::size_t inside = 0;
    for (double x : v) inside += (x >= b.whisker_lo && x <= b.whisker_hi);
    EXPECT_EQ(inside, b.within);
  }
}

// ---- mean difference ----

TEST(MeanDiff, HandWelchExample) {
  const std::vector<double> a{0.0, 0.1, -0.1, 0.0};
  const std::vector<double> b{1.0, 1.1, 0.9, 1.0};
  const auto r = mean_diff_ci(a, b);
  EXPECT_NEAR(r.diff, -1.0, 1e-12);
  EXPECT_TRUE(r.significant);
  EXPECT_NEAR(r.t_stat, -17.3205, 1e-3);
  // Independent recomputation.
  const double se = std::sqrt(var_of(a) / 4.0 + var_of(b) / 4.0);
  const double va = var_of(a) / 4.0;
  const double vb = var_of(b) / 4.0;
  const double df = (va + vb) * (va + vb) / (va * va / 3.0 + vb * vb / 3.0);
  EXPECT_NEAR(r.df, df, 1e-12);
  const double t = testing::t_quantile(0.975, df);
  EXPECT_NEAR(r.ci_lo, -1.0 - t * se, 1e-9);
  EXPECT_NEAR(r.ci_hi, -1.0 + t * se, 1e-9);
}

TEST(MeanDiff, IdenticalGroupsAreNotSignificant) {
  const std::vector<double> a{0.2, 0.4, 0.9, 0.1};
  const auto r = mean_diff_ci(a, a);
  EXPECT_EQ(r.diff, 0.0);
  EXPECT_LT(r.ci_lo, 0.0);
  EXPECT_GT(r.ci_hi, 0.0);
  EXPECT_FALSE(r.significant);
}

TEST(MeanDiff, SwappingGroupsMirrorsTheInterval) {
  const std::vector<double> a{0.1, 0.5, 0.3};
  const std::vector<double> b{0.7, 0.9, 0.6, 0.8};
  const auto ab = mean_diff_ci(a, b);
  const auto ba = mean_diff_ci(b, a);
  EXPECT_NEAR(ab.diff, -ba.diff, 1e-15);
  EXPECT_NEAR(ab.ci_lo, -ba.ci_hi, 1e-12);
  EXPECT_NEAR(ab.ci_hi, -ba.ci_lo, 1e-12);
}

TEST(MeanDiff, PooledMatchesTextbookFormula) {
  const std::vector<double> a{0.1, 0.5, 0.3, 0.2, 0.4};
  const std::vector<double> b{0.7, 0.9, 0.6};
  const auto r = mean_diff_ci(a, b, 0.05, VarianceModel::Pooled);
  const double sp2 = (4.0 * var_of(a) + 2.0 * var_of(b)) / 6.0;
  const double se = std::sqrt(sp2 * (1.0 / 5.0 + 1.0 / 3.0));
  const double t = testing::t_quantile(0.975, 6.0);
  EXPECT_NEAR(r.df, 6.0, 1e-12);
  EXPECT_NEAR(r.ci_lo, r.diff - t * se, 1e-9);
  EXPECT_NEAR(r.ci_hi, r.diff + t * se, 1e-9);
}

TEST(MeanDiff, Errors) {
  const std::vector<double> one{1.0};
  const std::vector<double> two{1.0, 2.0};
  EXPECT_THROW(mean_diff_ci(one, two), AnalysisError);
  EXPECT_THROW(mean_diff_ci(two, two, 0.0), AnalysisError);
  EXPECT_THROW(mean_diff_ci(two, two, 1.0), AnalysisError);
}

TEST(MeanDiff, ZeroVarianceGroupsCollapseToTheDifference) {
  const std::vector<double> a{1.0, 1.0};
  const std::vector<double> b{0.0, 0.0, 0.0};
  const auto r = mean_diff_ci(a, b);
  EXPECT_EQ(r.ci_lo, 1.0);
  EXPECT_EQ(r.ci_hi, 1.0);
  EXPECT_TRUE(r.significant);
}

TEST(MeanDiffProperty, VerdictMatchesZeroExclusion) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> shift(-0.5, 0.5);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> a(2 + rng() % 30);
    std::vector<double> b(2 + rng() % 30);
    const double s = shift(rng);
    for (auto& x : a) x = u(rng);
    for (auto& x : b) x = u(rng) + s;
    const auto model = trial % 2 ? VarianceModel::Pooled : VarianceModel::Welch;
    const auto r = mean_diff_ci(a, b, 0.05, model);
    EXPECT_EQ(r.significant, r.ci_lo > 0.0 || r.ci_hi < 0.0);
    EXPECT_LE(r.ci_lo, r.diff);
    EXPECT_GE(r.ci_hi, r.diff);
    EXPECT_FALSE(mean_diff_ci(a, a, 0.05, model).significant);
  }
}

// ---- battery ----

VariablesTable battery_table(const std::vector<std::string>& order) {
  // 6 first-stage rows (DFW <= 44) and 6 second-stage rows.
  const std::vector<Cell> dfw{10, 20, 30, 40, 44, 35, 50, 60, 70, 80, 45, 55};
  std::map<std::string, std::vector<Cell>> cols{
      {"DEG", {20, 22, 25, 18, 30, 21, 3, 4, 2, 5, 1, 2}},
      {"APRT", {1, 2, 3, 4, 5, 6, 1, 2, 3, 4, 5, 6}},
      {"GDP", {5, std::nullopt, 7, 8, 6, 5, 1, 2, 1, std::nullopt, 2, 1}},
      {"Zeta", {1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1}},
      {"Alpha", {1, std::nullopt, std::nullopt, std::nullopt, std::nullopt, std::nullopt, 3, 4, 5, 6, 7, 8}},
  };
  VariablesTable t(dfw.size());
  t.set_column("DFW", dfw);
  for (const auto& name : order) t.set_column(name, cols.at(name));
  return t;
}

TEST(Battery, OrderingSignificanceAndUntestables) {
  const auto b = stage_ttest_battery(battery_table({"Zeta", "APRT", "GDP", "Alpha", "DEG"}), 44.0);
  std::vector<std::string> names;
  for (const auto& e : b) names.push_back(e.variable);
  EXPECT_EQ(names, (std::vector<std::string>{"DEG", "GDP", "APRT", "Alpha", "Zeta"}));
  ASSERT_TRUE(b[0].result);
  EXPECT_TRUE(b[0].result->significant);
  EXPECT_GT(b[0].result->diff, 0.0);
  ASSERT_TRUE(b[2].result);
  EXPECT_FALSE(b[2].result->significant);  // equal in both groups
  EXPECT_NEAR(b[2].result->diff, 0.0, 1e-15);
  EXPECT_EQ(b[1].dropped_missing, 2u);
  EXPECT_EQ(b[1].n_a, 5u);
  EXPECT_EQ(b[1].n_b, 5u);
  EXPECT_FALSE(b[3].result);  // one value in the first stage
  EXPECT_FALSE(b[4].result);  // constant
  EXPECT_FALSE(b[3].note.empty());
}

TEST(Battery, StandardizesOverTheTestedRows) {
  const auto b = stage_ttest_battery(battery_table({"DEG"}), 44.0);
  // DEG max 30, min 1; first-stage mean of standardized values:
  const std::vector<double> first{20, 22, 25, 18, 30, 21};
  double m = 0.0;
  for (double x : first) m += (x - 1.0) / 29.0;
  EXPECT_NEAR(b[0].result->mean_a, m / 6.0, 1e-12);
}

TEST(Battery, SplitThenStandardizeOption) {
  BatteryOptions opts;
  opts.split_then_standardize = true;
  const auto b = stage_ttest_battery(battery_table({"DEG", "APRT"}), 44.0, opts);
  ASSERT_TRUE(b[1].result);
  EXPECT_NEAR(b[1].result->mean_a, 0.5, 1e-12);
  EXPECT_NEAR(b[1].result->mean_b, 0.5, 1e-12);
}

TEST(BatteryProperty, ColumnOrderDoesNotMatter) {
  std::vector<std::string> cols{"DEG", "APRT", "GDP", "Zeta", "Alpha"};
  const auto base = write_battery_csv(stage_ttest_battery(battery_table(cols), 44.0));
  std::mt19937 rng(4);
  for (int i = 0; i < 20; ++i) {
    std::shuffle(cols.begin(), cols.end(), rng);
    EXPECT_EQ(write_battery_csv(stage_ttest_battery(battery_table(cols), 44.0)), base);
  }
}

TEST(Battery, CsvLayout) {
  const auto text = write_battery_csv(stage_ttest_battery(battery_table({"DEG", "Zeta"}), 44.0));
  EXPECT_EQ(text.substr(0, text.find('\n')), "variable,group,n_a,n_b,diff,ci_lo,ci_hi,significant");
  EXPECT_NE(text.find("DEG,1D,6,6,"), std::string::npos);
  EXPECT_NE(text.find("Zeta,extra,6,6,,,,NA"), std::string::npos) << text;
  EXPECT_EQ(text.find('\r'), std::string::npos);
}

TEST(Battery, MissingDfwColumnIsAnError) {
  VariablesTable t(3);
  t.set_column("DEG", {1.0, 2.0, 3.0});
  EXPECT_THROW(stage_ttest_battery(t, 44.0), AnalysisError);
}

// ---- quadrants and stages ----

TEST(Quadrant, Examples) {
  EXPECT_EQ(quadrant_classify(30, 20).label, QuadrantLabel::Q4);
  EXPECT_EQ(quadrant_classify(50, 1).label, QuadrantLabel::Q2);
  EXPECT_EQ(quadrant_classify(44, 15).label, QuadrantLabel::Q1);
  EXPECT_EQ(quadrant_classify(45, 16).label, QuadrantLabel::Q3);
  EXPECT_EQ(quadrant_classify(44, 15).t_cut, 44.0);
  EXPECT_EQ(quadrant_classify(10, 3, 5, 2).label, QuadrantLabel::Q3);
}

TEST(QuadrantProperty, LabelsPartitionThePlane) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> t(0, 100);
  std::uniform_int_distribution<int> k(0, 30);
  for (int i = 0; i < 2000; ++i) {
    const double tt = t(rng);
    const double kk = k(rng);
    const auto q = quadrant_classify(tt, kk).label;
    const bool early = tt <= 44;
    const bool hub = kk > 15;
    const auto expected = early ? (hub ? QuadrantLabel::Q4 : QuadrantLabel::Q1)
                                : (hub ? QuadrantLabel::Q3 : QuadrantLabel::Q2);
    EXPECT_EQ(q, expected);
  }
}

TEST(Stages, InclusiveCut) {
  VariablesTable t(4);
  t.set_column("DFW", {44.0, 45.0, std::nullopt, 0.0});
  const auto s = assign_stages(t, 44.0);
  EXPECT_EQ(s.stage[0], Stage::First);
  EXPECT_EQ(s.stage[1], Stage::Second);
  EXPECT_FALSE(s.stage[2]);
  EXPECT_EQ(s.stage[3], Stage::First);
  EXPECT_EQ(s.first_count, 2u);
  EXPECT_EQ(s.second_count, 1u);
  EXPECT_EQ(s.missing, (std::vector<NodeId>{2}));
  EXPECT_EQ(s.cut_used, 44.0);
}

TEST(Stages, AllZeroIsAllFirst) {
  VariablesTable t(3);
  t.set_column("DFW", {0.0, 0.0, 0.0});
  EXPECT_EQ(assign_stages(t, 44.0).first_count, 3u);
  VariablesTable none(2);
  EXPECT_THROW(assign_stages(none, 44.0), AnalysisError);
}

}  // namespace
}  // namespace netspread
