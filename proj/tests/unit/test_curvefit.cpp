#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "netspread/curvefit.hpp"
#include "netspread/errors.hpp"

namespace netspread {
namespace {

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

std::vector<double> sample(CurveFamily f, const std::vector<double>& c, const std::vector<double>& xs) {
  std::vector<double> ys;
  for (double x : xs) ys.push_back(evaluate(f, c, x));
  return ys;
}

void expect_relative(const std::vector<double>& got, const std::vector<double>& want, double tol) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_LE(std::abs(got[i] - want[i]), tol * std::max(1.0, std::abs(want[i])))
        << "coefficient " << i << ": " << got[i] << " vs " << want[i];
  }
}

TEST(Families, ArityNamesAndParsing) {
  EXPECT_EQ(arity(CurveFamily::Poly1), 2u);
  EXPECT_EQ(arity(CurveFamily::Poly2), 3u);
  EXPECT_EQ(arity(CurveFamily::Poly3), 4u);
  EXPECT_EQ(arity(CurveFamily::Power1), 2u);
  EXPECT_EQ(arity(CurveFamily::Gauss1), 3u);
  EXPECT_EQ(arity(CurveFamily::Exp1), 2u);
  EXPECT_EQ(arity(CurveFamily::Log1), 2u);
  EXPECT_EQ(parse_family("exp1"), CurveFamily::Exp1);
  EXPECT_EQ(parse_family("POLY3"), CurveFamily::Poly3);
  EXPECT_FALSE(parse_family("gauss2"));
  EXPECT_EQ(all_families().size(), 7u);
  for (auto f : all_families()) EXPECT_EQ(coefficient_names(f).size(), arity(f));
}

TEST(Fit, TwoPointLineIsExactInterpolationButRejected) {
  const std::vector<double> xs{0.0, 1.0};
  const std::vector<double> ys{1.0, 3.0};
  try {
    fit(CurveFamily::Poly1, xs, ys);
    FAIL() << "n = arity must be rejected";
  } catch (const AnalysisError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("b1=2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("c=1"), std::string::npos) << msg;
  }
}

TEST(Fit, LineThroughThreePoints) {
  const std::vector<double> xs{0.0, 1.0, 2.0};
  const std::vector<double> ys{1.0, 3.0, 5.0};
  const auto r = fit(CurveFamily::Poly1, xs, ys);
  EXPECT_NEAR(r.coefficients[0], 2.0, 1e-12);
  EXPECT_NEAR(r.coefficients[1], 1.0, 1e-12);
  EXPECT_NEAR(r.r2, 1.0, 1e-12);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.residuals.size(), 3u);
}

TEST(Fit, Exp1RecoversTheDecayCurve) {
  const auto xs = linspace(0.0, 100.0, 50);
  const auto ys = sample(CurveFamily::Exp1, {10.82, -0.018}, xs);
  const auto r = fit(CurveFamily::Exp1, xs, ys);
  ASSERT_TRUE(r.converged);
  expect_relative(r.coefficients, {10.82, -0.018}, 1e-6);
}

TEST(Fit, Gauss1RecoversPlantedPeak) {
  const auto xs = linspace(0.0, 10.0, 50);
  const auto r = fit(CurveFamily::Gauss1, xs, sample(CurveFamily::Gauss1, {2.0, 5.0, 1.0}, xs));
  ASSERT_TRUE(r.converged);
  expect_relative(r.coefficients, {2.0, 5.0, 1.0}, 1e-6);
}

TEST(Fit, DomainViolationNamesPoints) {
  const std::vector<double> xs{-1.0, 1.0, 2.0, 3.0};
  const std::vector<double> ys{1.0, 2.0, 3.0, 4.0};
  for (auto f : {CurveFamily::Log1, CurveFamily::Power1}) {
    try {
      fit(f, xs, ys);
      FAIL();
    } catch (const AnalysisError& e) {
      EXPECT_NE(std::string(e.what()).find("x=-1"), std::string::npos) << e.what();
    }
  }
}

TEST(Fit, SingularDesignAndBadInput) {
  const std::vector<double> xs{2.0, 2.0, 2.0, 2.0};
  const std::vector<double> ys{1.0, 2.0, 3.0, 4.0};
  EXPECT_THROW(fit(CurveFamily::Poly1, xs, ys), AnalysisError);
  const std::vector<double> short_y{1.0, 2.0};
  EXPECT_THROW(fit(CurveFamily::Poly1, xs, short_y), AnalysisError);
  const std::vector<double> bad{1.0, NAN, 3.0, 4.0};
  EXPECT_THROW(fit(CurveFamily::Poly1, ys, bad), AnalysisError);
}

TEST(Fit, NonConvergenceIsReportedNotHidden) {
  const auto xs = linspace(0.0, 10.0, 30);
  const auto ys = sample(CurveFamily::Gauss1, {2.0, 5.0, 1.0}, xs);
  FitOptions opts;
  opts.max_iterations = 1;
  const auto r = fit(CurveFamily::Gauss1, xs, ys, opts);
  if (!r.converged) {
    EXPECT_THROW(predict(r, 1.0), AnalysisError);
  }
  EXPECT_LE(r.iterations, 1);
}

TEST(Fit, AdjustedR2Formula) {
  std::mt19937 rng(2);
  std::normal_distribution<double> noise(0.0, 0.3);
  const auto xs = linspace(1.0, 9.0, 20);
  std::vector<double> ys;
  for (double x : xs) ys.push_back(1.0 + 0.5 * x + noise(rng));
  for (auto f : {CurveFamily::Poly1, CurveFamily::Poly2, CurveFamily::Poly3, CurveFamily::Log1}) {
    const auto r = fit(f, xs, ys);
    const double n = 20.0;
    const double p = static_cast<double>(arity(f)) - 1.0;
    EXPECT_NEAR(r.adj_r2, 1.0 - (1.0 - r.r2) * (n - 1.0) / (n - p - 1.0), 1e-14);
    EXPECT_LE(r.adj_r2, r.r2);
    EXPECT_LE(r.r2, 1.0);
    EXPECT_GE(r.sse, 0.0);
  }
}

TEST(BestFit, CubicDataRanksPoly3First) {
  const auto xs = linspace(-3.0, 3.0, 40);
  std::mt19937 rng(4);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::vector<double> ys;
  for (double x : xs) ys.push_back(0.5 * x * x * x - x * x + 2.0 * x + 1.0 + noise(rng));
  const auto ranked = best_fit(xs, ys, all_families());
  ASSERT_FALSE(ranked.ranked.empty());
  EXPECT_EQ(ranked.ranked.front().family, CurveFamily::Poly3);
}

TEST(BestFit, NegativeXSkipsLogAndPower) {
  const auto xs = linspace(-5.0, 5.0, 20);
  std::vector<double> ys;
  for (double x : xs) ys.push_back(2.0 * x + 1.0);
  const auto ranked = best_fit(xs, ys, all_families());
  std::vector<CurveFamily> skipped;
  for (const auto& s : ranked.skipped) skipped.push_back(s.family);
  EXPECT_NE(std::find(skipped.begin(), skipped.end(), CurveFamily::Log1), skipped.end());
  EXPECT_NE(std::find(skipped.begin(), skipped.end(), CurveFamily::Power1), skipped.end());
  bool has_poly = false;
  for (const auto& r : ranked.ranked) has_poly |= r.family == CurveFamily::Poly1;
  EXPECT_TRUE(has_poly);
}

TEST(BestFit, OrderingIsAdjR2DescendingWithTiesToFewerCoefficients) {
  const auto xs = linspace(1.0, 5.0, 12);
  std::vector<double> ys;
  for (double x : xs) ys.push_back(3.0 * x + 2.0);
  const auto ranked = best_fit(xs, ys, all_families());
  for (std::size_t i = 1; i < ranked.ranked.size(); ++i) {
    const auto& a = ranked.ranked[i - 1];
    const auto& b = ranked.ranked[i];
    if (a.converged != b.converged) {
      EXPECT_TRUE(a.converged);
      continue;
    }
    EXPECT_GE(a.adj_r2, b.adj_r2);
    if (a.adj_r2 == b.adj_r2) EXPECT_LE(arity(a.family), arity(b.family));
  }
}

TEST(BestFit, AllSkippedIsAnError) {
  const std::vector<double> xs{-1.0, -2.0, -3.0};
  const std::vector<double> ys{1.0, 2.0, 3.0};
  const std::vector<CurveFamily> fams{CurveFamily::Log1, CurveFamily::Power1};
  EXPECT_THROW(best_fit(xs, ys, fams), AnalysisError);
}

TEST(GroupMean, Examples) {
  const std::vector<double> keys{1.0, 1.0, 2.0};
  const std::vector<double> vals{2.0, 4.0, 6.0};
  const auto g = group_mean(keys, vals);
  EXPECT_EQ(g.keys, (std::vector<double>{1.0, 2.0}));
  EXPECT_EQ(g.means, (std::vector<double>{3.0, 6.0}));
  const std::vector<double> one{5.0, 5.0, 5.0};
  EXPECT_DOUBLE_EQ(group_mean(one, vals).means[0], 4.0);
  const std::vector<double> empty;
  EXPECT_THROW(group_mean(empty, empty), AnalysisError);
}

TEST(GroupMeanProperty, MatchesBucketing) {
  std::mt19937 rng(8);
  std::uniform_int_distribution<int> key(0, 9);
  std::normal_distribution<double> val(0.0, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> k;
    std::vector<double> v;
    std::map<double, std::pair<double, int>> oracle;
    for (int i = 0; i < 50; ++i) {
      k.push_back(key(rng));
      v.push_back(val(rng));
      oracle[k.back()].first += v.back();
      oracle[k.back()].second += 1;
    }
    const auto g = group_mean(k, v);
    ASSERT_EQ(g.keys.size(), oracle.size());
    std::size_t i = 0;
    for (const auto& [kk, sc] : oracle) {
      EXPECT_EQ(g.keys[i], kk);
      EXPECT_NEAR(g.means[i], sc.first / sc.second, 1e-12);
      EXPECT_EQ(g.counts[i], static_cast<std::size_t>(sc.second));
      ++i;
    }
  }
}

TEST(Predict, Examples) {
  FitResult e;
  e.family = CurveFamily::Exp1;
  e.coefficients = {10.82, -0.018};
  e.converged = true;
  EXPECT_DOUBLE_EQ(predict(e, 0.0), 10.82);
  EXPECT_NEAR(predict(e, 44.0), 10.82 * std::exp(-0.792), 1e-12);
  EXPECT_NEAR(predict(e, 44.0), 4.9008, 1e-4);
  FitResult p;
  p.family = CurveFamily::Poly1;
  p.coefficients = {2.0, 1.0};
  p.converged = true;
  EXPECT_EQ(predict(p, 3.0), 7.0);
  FitResult l;
  l.family = CurveFamily::Log1;
  l.coefficients = {1.0, 0.0};
  l.converged = true;
  EXPECT_THROW(predict(l, 0.0), AnalysisError);
}

// ---- properties ----

TEST(FitProperty, LinearResidualsAreOrthogonalToBasis) {
  std::mt19937 rng(12);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> ux(0.1, 4.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> xs(30);
    std::vector<double> ys(30);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      xs[i] = ux(rng);
      ys[i] = 2.0 * xs[i] - xs[i] * xs[i] + noise(rng);
    }
    for (auto f : {CurveFamily::Poly1, CurveFamily::Poly2, CurveFamily::Poly3, CurveFamily::Log1}) {
      const auto r = fit(f, xs, ys);
      const std::size_t d = f == CurveFamily::Log1 ? 1 : arity(f) - 1;
      double s0 = 0.0;
      for (double e : r.residuals) s0 += e;
      EXPECT_NEAR(s0, 0.0, 1e-8);
      for (std::size_t j = 1; j <= d; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
          const double basis = f == CurveFamily::Log1 ? std::log(xs[i]) : std::pow(xs[i], static_cast<double>(j));
          s += r.residuals[i] * basis;
        }
        EXPECT_NEAR(s, 0.0, 1e-8) << to_string(f) << " basis " << j;
      }
    }
  }
}

TEST(FitProperty, PolyScaleEquivariance) {
  std::mt19937 rng(13);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> scale(-50.0, 50.0);
  const auto xs = linspace(-2.0, 3.0, 25);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> ys;
    for (double x : xs) ys.push_back(x * x * x - x + noise(rng));
    double s = scale(rng);
    if (std::abs(s) < 0.1) s = 1.5;
    std::vector<double> scaled;
    for (double y : ys) scaled.push_back(s * y);
    for (auto f : {CurveFamily::Poly1, CurveFamily::Poly2, CurveFamily::Poly3}) {
      const auto a = fit(f, xs, ys);
      const auto b = fit(f, xs, scaled);
      for (std::size_t j = 0; j < a.coefficients.size(); ++j) {
        EXPECT_NEAR(b.coefficients[j], s * a.coefficients[j], 1e-9 * std::max(1.0, std::abs(s * a.coefficients[j])));
      }
      EXPECT_NEAR(a.r2, b.r2, 1e-10);
    }
  }
}

TEST(FitProperty, NonlinearSseNeverIncreases) {
  std::mt19937 rng(14);
  std::normal_distribution<double> noise(0.0, 0.2);
  const auto xs = linspace(0.5, 10.0, 40);
  for (int trial = 0; trial < 30; ++trial) {
    for (auto f : {CurveFamily::Exp1, CurveFamily::Power1, CurveFamily::Gauss1}) {
      std::vector<double> ys;
      for (double x : xs) ys.push_back(3.0 * std::exp(-0.3 * x) + 1.0 * std::exp(-(x - 4.0) * (x - 4.0)) + noise(rng));
      const auto r = fit(f, xs, ys);
      ASSERT_FALSE(r.sse_trace.empty());
      for (std::size_t i = 1; i < r.sse_trace.size(); ++i) EXPECT_LE(r.sse_trace[i], r.sse_trace[i - 1]);
      EXPECT_LE(r.sse, r.sse_trace.front());
    }
  }
}

}  // namespace
}  // namespace netspread
