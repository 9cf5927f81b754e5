#include "netspread/curvefit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>

#include "netspread/csv.hpp"
#include "netspread/errors.hpp"

namespace netspread {

namespace {

constexpr std::array kFamilies = {CurveFamily::Poly1, CurveFamily::Poly2, CurveFamily::Poly3, CurveFamily::Power1,
                                  CurveFamily::Gauss1, CurveFamily::Exp1, CurveFamily::Log1};

int poly_degree(CurveFamily f) {
  switch (f) {
    case CurveFamily::Poly1: return 1;
    case CurveFamily::Poly2: return 2;
    case CurveFamily::Poly3: return 3;
    default: return 0;
  }
}

void score(FitResult& r, std::span<const double> ys) {
  const double n = static_cast<double>(ys.size());
  const double mean = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  r.sst = 0.0;
  for (double y : ys) r.sst += (y - mean) * (y - mean);
  r.sse = 0.0;
  for (double e : r.residuals) r.sse += e * e;
  if (r.sst > 0.0) r.r2 = 1.0 - r.sse / r.sst;
  else r.r2 = r.sse == 0.0 ? 1.0 : 0.0;
  // p counts regressors, excluding the intercept-like coefficient.
  const double p = static_cast<double>(arity(r.family)) - 1.0;
  r.adj_r2 = 1.0 - (1.0 - r.r2) * (n - 1.0) / (n - p - 1.0);
}

void fill_residuals(FitResult& r, std::span<const double> xs, std::span<const double> ys) {
  r.residuals.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) r.residuals[i] = ys[i] - evaluate(r.family, r.coefficients, xs[i]);
}

// Design column j for the linear families.
double basis(CurveFamily f, std::size_t j, double x) {
  if (f == CurveFamily::Log1) return j == 0 ? std::log(x) : 1.0;
  const auto d = static_cast<std::size_t>(poly_degree(f));
  return j < d ? std::pow(x, static_cast<double>(j + 1)) : 1.0;
}

FitResult fit_linear(CurveFamily family, std::span<const double> xs, std::span<const double> ys) {
  const auto n = static_cast<Eigen::Index>(xs.size());
  const auto p = static_cast<Eigen::Index>(arity(family));
  Eigen::MatrixXd design(n, p);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) design(i, j) = basis(family, static_cast<std::size_t>(j), xs[i]);
    rhs(i) = ys[i];
  }
  // Equilibrate columns so x^3 and the intercept share a scale.
  Eigen::VectorXd scale(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    scale(j) = design.col(j).cwiseAbs().maxCoeff();
    if (scale(j) == 0.0) {
      throw AnalysisError(std::string(to_string(family)) + ": singular design matrix (all-zero column)");
    }
    design.col(j) /= scale(j);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-12);
  if (qr.rank() < p) {
    throw AnalysisError(std::string(to_string(family)) + ": singular design matrix (rank " +
                        std::to_string(qr.rank()) + " < " + std::to_string(p) +
                        "); x needs at least " + std::to_string(p) + " distinct values");
  }
  const Eigen::VectorXd beta = qr.solve(rhs).cwiseQuotient(scale);

  FitResult r;
  r.family = family;
  r.n = xs.size();
  r.coefficients.assign(beta.data(), beta.data() + p);
  r.converged = true;
  fill_residuals(r, xs, ys);
  score(r, ys);
  return r;
}

void jacobian_row(CurveFamily f, const Eigen::VectorXd& c, double x, Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>> row) {
  switch (f) {
    case CurveFamily::Exp1: {
      const double e = std::exp(c(1) * x);
      row(0) = e;
      row(1) = c(0) * x * e;
      break;
    }
    case CurveFamily::Power1: {
      const double px = std::pow(x, c(0));
      row(0) = c(1) * px * std::log(x);
      row(1) = px;
      break;
    }
    case CurveFamily::Gauss1: {
      const double u = (x - c(1)) / c(2);
      const double e = std::exp(-u * u);
      row(0) = e;
      row(1) = c(0) * e * 2.0 * u / c(2);
      row(2) = c(0) * e * 2.0 * u * u / c(2);
      break;
    }
    default:
      break;
  }
}

// Straight-line least squares of v on u; returns {intercept, slope}.
std::optional<std::pair<double, double>> line_fit(const std::vector<double>& u, const std::vector<double>& v) {
  if (u.size() < 2) return std::nullopt;
  const double n = static_cast<double>(u.size());
  const double mu = std::accumulate(u.begin(), u.end(), 0.0) / n;
  const double mv = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double suu = 0.0;
  double suv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    suu += (u[i] - mu) * (u[i] - mu);
    suv += (u[i] - mu) * (v[i] - mv);
  }
  if (suu == 0.0) return std::nullopt;
  const double slope = suv / suu;
  return std::make_pair(mv - slope * mu, slope);
}

// Log-linearised seed for y = s * exp(t * g(x)). Uses the sign shared by the
// majority of y values.
std::pair<double, double> log_linear_seed(std::span<const double> xs, std::span<const double> ys, bool log_x) {
  const auto positives = std::count_if(ys.begin(), ys.end(), [](double y) { return y > 0.0; });
  const auto negatives = std::count_if(ys.begin(), ys.end(), [](double y) { return y < 0.0; });
  const double sign = positives >= negatives ? 1.0 : -1.0;
  std::vector<double> u;
  std::vector<double> v;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (sign * ys[i] > 0.0) {
      u.push_back(log_x ? std::log(xs[i]) : xs[i]);
      v.push_back(std::log(sign * ys[i]));
    }
  }
  if (const auto line = line_fit(u, v)) return {sign * std::exp(line->first), line->second};
  const double mean = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
  return {mean != 0.0 ? mean : 1.0, 0.0};
}

Eigen::VectorXd seed(CurveFamily f, std::span<const double> xs, std::span<const double> ys) {
  Eigen::VectorXd c(static_cast<Eigen::Index>(arity(f)));
  switch (f) {
    case CurveFamily::Exp1: {
      const auto [a, b] = log_linear_seed(xs, ys, false);
      c << a, b;
      break;
    }
    case CurveFamily::Power1: {
      const auto [scale, exponent] = log_linear_seed(xs, ys, true);
      c << exponent, scale;
      break;
    }
    case CurveFamily::Gauss1: {
      const auto peak = static_cast<std::size_t>(std::max_element(ys.begin(), ys.end()) - ys.begin());
      const double a = ys[peak];
      const double b = xs[peak];
      double lo = b;
      double hi = b;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (ys[i] >= a / 2.0) {
          lo = std::min(lo, xs[i]);
          hi = std::max(hi, xs[i]);
        }
      }
      double width = (hi - lo) / 2.0;
      if (width <= 0.0) {
        const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
        width = (*mx - *mn) / 4.0;
      }
      c << a, b, width > 0.0 ? width : 1.0;
      break;
    }
    default:
      break;
  }
  return c;
}

FitResult fit_nonlinear(CurveFamily family, std::span<const double> xs, std::span<const double> ys,
                        const FitOptions& options) {
  const auto n = static_cast<Eigen::Index>(xs.size());
  const auto p = static_cast<Eigen::Index>(arity(family));

  Eigen::VectorXd coef = seed(family, xs, ys);
  Eigen::VectorXd resid(n);
  Eigen::MatrixXd jac(n, p);

  auto residuals_at = [&](const Eigen::VectorXd& c, Eigen::VectorXd& out) {
    const std::vector<double> cv(c.data(), c.data() + p);
    double sse = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      out(i) = ys[i] - evaluate(family, cv, xs[i]);
      sse += out(i) * out(i);
    }
    return std::isfinite(sse) ? sse : std::numeric_limits<double>::infinity();
  };

  FitResult r;
  r.family = family;
  r.n = xs.size();

  double sse = residuals_at(coef, resid);
  if (!std::isfinite(sse)) {
    throw AnalysisError(std::string(to_string(family)) + ": seed produced non-finite model values");
  }
  r.sse_trace.push_back(sse);

  double lambda = 1e-3;
  Eigen::VectorXd trial_resid(n);
  int iter = 0;
  bool converged = sse == 0.0;
  for (; iter < options.max_iterations && !converged; ++iter) {
    for (Eigen::Index i = 0; i < n; ++i) jacobian_row(family, coef, xs[i], jac.row(i));
    const Eigen::VectorXd grad = jac.transpose() * resid;
    // Stationarity, absolute or relative to the magnitude of the terms summed.
    const Eigen::VectorXd magnitude = jac.cwiseAbs().transpose() * resid.cwiseAbs();
    bool stationary = grad.cwiseAbs().maxCoeff() <= options.gradient_tolerance;
    if (!stationary) {
      stationary = true;
      for (Eigen::Index j = 0; j < p; ++j) {
        if (std::abs(grad(j)) > options.gradient_tolerance * magnitude(j)) stationary = false;
      }
    }
    if (stationary) {
      converged = true;
      break;
    }

    const Eigen::MatrixXd normal = jac.transpose() * jac;
    Eigen::VectorXd diag = normal.diagonal();
    const double diag_floor = 1e-12 * std::max(1.0, diag.maxCoeff());
    for (Eigen::Index j = 0; j < p; ++j) diag(j) = std::max(diag(j), diag_floor);

    bool accepted = false;
    while (!accepted && lambda < 1e20) {
      Eigen::MatrixXd damped = normal;
      damped.diagonal() += lambda * diag;
      const Eigen::VectorXd step = damped.ldlt().solve(grad);
      const Eigen::VectorXd candidate = coef + step;
      const double trial_sse = candidate.allFinite() ? residuals_at(candidate, trial_resid)
                                                     : std::numeric_limits<double>::infinity();
      if (trial_sse < sse) {
        const bool tiny = step.norm() <= 1e-15 * (coef.norm() + 1e-15);
        coef = candidate;
        resid = trial_resid;
        sse = trial_sse;
        r.sse_trace.push_back(sse);
        lambda = std::max(lambda / 10.0, 1e-15);
        accepted = true;
        if (tiny || sse == 0.0) converged = true;
      } else {
        lambda *= 10.0;
      }
    }
    if (!accepted) {
      // No descent direction left at working precision.
      for (Eigen::Index i = 0; i < n; ++i) jacobian_row(family, coef, xs[i], jac.row(i));
      const Eigen::VectorXd g = jac.transpose() * resid;
      const Eigen::VectorXd m = jac.cwiseAbs().transpose() * resid.cwiseAbs();
      converged = true;
      for (Eigen::Index j = 0; j < p; ++j) {
        if (std::abs(g(j)) > 1e-8 * m(j) && std::abs(g(j)) > options.gradient_tolerance) converged = false;
      }
      ++iter;
      break;
    }
  }

  if (family == CurveFamily::Gauss1) coef(2) = std::abs(coef(2));
  r.coefficients.assign(coef.data(), coef.data() + p);
  r.iterations = iter;
  r.converged = converged;
  fill_residuals(r, xs, ys);
  score(r, ys);
  return r;
}

std::string lower(std::string_view s) {
  std::string out;
  for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

}  // namespace

std::string_view to_string(CurveFamily family) {
  switch (family) {
    case CurveFamily::Poly1: return "Poly1";
    case CurveFamily::Poly2: return "Poly2";
    case CurveFamily::Poly3: return "Poly3";
    case CurveFamily::Power1: return "Power1";
    case CurveFamily::Gauss1: return "Gauss1";
    case CurveFamily::Exp1: return "Exp1";
    case CurveFamily::Log1: return "Log1";
  }
  return "?";
}

std::optional<CurveFamily> parse_family(std::string_view text) {
  const std::string key = lower(text);
  for (auto f : kFamilies) {
    if (lower(to_string(f)) == key) return f;
  }
  return std::nullopt;
}

std::span<const CurveFamily> all_families() { return kFamilies; }

std::size_t arity(CurveFamily family) {
  switch (family) {
    case CurveFamily::Poly1: return 2;
    case CurveFamily::Poly2: return 3;
    case CurveFamily::Poly3: return 4;
    case CurveFamily::Power1: return 2;
    case CurveFamily::Gauss1: return 3;
    case CurveFamily::Exp1: return 2;
    case CurveFamily::Log1: return 2;
  }
  return 0;
}

std::vector<std::string_view> coefficient_names(CurveFamily family) {
  switch (family) {
    case CurveFamily::Poly1: return {"b1", "c"};
    case CurveFamily::Poly2: return {"b1", "b2", "c"};
    case CurveFamily::Poly3: return {"b1", "b2", "b3", "c"};
    case CurveFamily::Power1: return {"a", "b"};
    case CurveFamily::Gauss1: return {"a", "b", "c"};
    case CurveFamily::Exp1: return {"a", "b"};
    case CurveFamily::Log1: return {"b", "c"};
  }
  return {};
}

bool is_linear(CurveFamily family) {
  return family == CurveFamily::Poly1 || family == CurveFamily::Poly2 || family == CurveFamily::Poly3 ||
         family == CurveFamily::Log1;
}

bool requires_positive_x(CurveFamily family) {
  return family == CurveFamily::Log1 || family == CurveFamily::Power1;
}

double evaluate(CurveFamily family, std::span<const double> c, double x) {
  switch (family) {
    case CurveFamily::Poly1: return c[0] * x + c[1];
    case CurveFamily::Poly2: return (c[1] * x + c[0]) * x + c[2];
    case CurveFamily::Poly3: return ((c[2] * x + c[1]) * x + c[0]) * x + c[3];
    case CurveFamily::Power1: return c[1] * std::pow(x, c[0]);
    case CurveFamily::Gauss1: {
      const double u = (x - c[1]) / c[2];
      return c[0] * std::exp(-u * u);
    }
    case CurveFamily::Exp1: return c[0] * std::exp(c[1] * x);
    case CurveFamily::Log1: return c[0] * std::log(x) + c[1];
  }
  return std::numeric_limits<double>::quiet_NaN();
}

FitResult fit(CurveFamily family, std::span<const double> xs, std::span<const double> ys, const FitOptions& options) {
  const std::string name(to_string(family));
  if (xs.size() != ys.size()) {
    throw AnalysisError(name + ": x and y lengths differ (" + std::to_string(xs.size()) + " vs " +
                        std::to_string(ys.size()) + ")");
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
      throw AnalysisError(name + ": non-finite value at point " + std::to_string(i));
    }
  }
  if (requires_positive_x(family)) {
    std::string bad;
    std::size_t count = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i] <= 0.0) {
        if (count < 5) bad += (count ? ", " : "") + std::string("#") + std::to_string(i) + " (x=" + csv::format_number(xs[i]) + ")";
        ++count;
      }
    }
    if (count) {
      throw AnalysisError(name + ": requires x > 0; " + std::to_string(count) + " offending point(s): " + bad +
                          (count > 5 ? ", ..." : ""));
    }
  }
  const std::size_t k = arity(family);
  if (xs.size() <= k) {
    std::string hint;
    if (xs.size() == k) {
      hint = " (exact interpolation leaves adjusted R^2 undefined";
      if (is_linear(family)) {
        try {
          const auto exact = fit_linear(family, xs, ys);
          const auto names = coefficient_names(family);
          hint += "; interpolant";
          for (std::size_t j = 0; j < names.size(); ++j) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6g", exact.coefficients[j]);
            hint += (j ? ", " : " ") + std::string(names[j]) + "=" + buf;
          }
        } catch (const AnalysisError&) {
        }
      }
      hint += ")";
    }
    throw AnalysisError(name + ": needs more than " + std::to_string(k) + " points, got " +
                        std::to_string(xs.size()) + hint);
  }
  if (is_linear(family)) return fit_linear(family, xs, ys);
  return fit_nonlinear(family, xs, ys, options);
}

double predict(const FitResult& fit, double x) {
  if (!fit.converged) throw AnalysisError(std::string(to_string(fit.family)) + ": fit did not converge");
  if (requires_positive_x(fit.family) && !(x > 0.0)) {
    throw AnalysisError(std::string(to_string(fit.family)) + ": x = " + csv::format_number(x) + " outside domain x > 0");
  }
  return evaluate(fit.family, fit.coefficients, x);
}

RankedFits best_fit(std::span<const double> xs, std::span<const double> ys, std::span<const CurveFamily> families,
                    const FitOptions& options) {
  RankedFits out;
  for (auto family : families) {
    try {
      out.ranked.push_back(fit(family, xs, ys, options));
    } catch (const AnalysisError& e) {
      out.skipped.push_back({family, e.what()});
    }
  }
  if (out.ranked.empty()) throw AnalysisError("every requested curve family was skipped");
  std::stable_sort(out.ranked.begin(), out.ranked.end(), [](const FitResult& a, const FitResult& b) {
    if (a.converged != b.converged) return a.converged;
    if (a.adj_r2 != b.adj_r2) return a.adj_r2 > b.adj_r2;
    return arity(a.family) < arity(b.family);
  });
  return out;
}

GroupMeans group_mean(std::span<const double> keys, std::span<const double> values) {
  if (keys.size() != values.size()) throw AnalysisError("group_mean: keys and values differ in length");
  if (keys.empty()) throw AnalysisError("group_mean: empty input");
  std::map<double, std::pair<double, std::size_t>> buckets;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (std::isnan(keys[i])) throw AnalysisError("group_mean: NaN key at position " + std::to_string(i));
    auto& b = buckets[keys[i]];
    b.first += values[i];
    ++b.second;
  }
  GroupMeans out;
  for (const auto& [key, b] : buckets) {
    out.keys.push_back(key);
    out.means.push_back(b.first / static_cast<double>(b.second));
    out.counts.push_back(b.second);
  }
  return out;
}

}  // namespace netspread
