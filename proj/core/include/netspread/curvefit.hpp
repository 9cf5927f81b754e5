#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace netspread {

/// Parametric curve families. Coefficient order follows coefficient_names():
///   Poly1..3  y = b1*x + ... + bd*x^d + c         [b1, ..., bd, c]
///   Power1    y = b * x^a                          [a, b]
///   Gauss1    y = a * exp(-((x - b) / c)^2)        [a, b, c]
///   Exp1      y = a * exp(b * x)                   [a, b]
///   Log1      y = b * ln(x) + c                    [b, c]
enum class CurveFamily { Poly1, Poly2, Poly3, Power1, Gauss1, Exp1, Log1 };

std::string_view to_string(CurveFamily family);
/// Case-insensitive ("poly1", "Exp1", ...).
std::optional<CurveFamily> parse_family(std::string_view text);
std::span<const CurveFamily> all_families();

std::size_t arity(CurveFamily family);
std::vector<std::string_view> coefficient_names(CurveFamily family);
/// True for families that are linear in their coefficients.
bool is_linear(CurveFamily family);
/// Log1 and Power1 need x > 0.
bool requires_positive_x(CurveFamily family);

/// Model value for raw coefficients; no domain checks.
double evaluate(CurveFamily family, std::span<const double> coefficients, double x);

struct FitResult {
  CurveFamily family = CurveFamily::Poly1;
  std::vector<double> coefficients;
  std::size_t n = 0;
  double sse = 0.0;
  double sst = 0.0;
  double r2 = 0.0;
  double adj_r2 = 0.0;
  std::vector<double> residuals;  // y - yhat
  bool converged = false;
  int iterations = 0;             // 0 for closed-form fits
  std::vector<double> sse_trace;  // accepted-iterate SSE, nonlinear families only
};

struct FitOptions {
  int max_iterations = 200;
  double gradient_tolerance = 1e-10;
};

/// Least-squares fit. Linear families are solved by column-pivoted
/// Householder QR; Power1, Gauss1 and Exp1 by damped Gauss-Newton
/// (Levenberg-Marquardt) from a deterministic seed. Throws AnalysisError on
/// length mismatch, n <= arity, domain violations, non-finite data or a
/// rank-deficient design. Non-convergence is reported via `converged`.
FitResult fit(CurveFamily family, std::span<const double> xs, std::span<const double> ys,
              const FitOptions& options = {});

/// Evaluates a converged fit. Throws AnalysisError if the fit did not
/// converge or x is outside the family's domain.
double predict(const FitResult& fit, double x);

struct SkippedFamily {
  CurveFamily family;
  std::string reason;
};

struct RankedFits {
  std::vector<FitResult> ranked;  // best first
  std::vector<SkippedFamily> skipped;
};

/// Fits every requested family. Families whose preconditions fail are
/// skipped with the reason. Converged fits rank ahead of unconverged ones,
/// then by adjusted R^2 descending, ties to fewer coefficients. Throws
/// AnalysisError when every family is skipped.
RankedFits best_fit(std::span<const double> xs, std::span<const double> ys, std::span<const CurveFamily> families,
                    const FitOptions& options = {});

struct GroupMeans {
  std::vector<double> keys;  // ascending, unique
  std::vector<double> means;
  std::vector<std::size_t> counts;
};

/// Mean of `values` per exact key. Throws AnalysisError on empty or
/// mismatched input.
GroupMeans group_mean(std::span<const double> keys, std::span<const double> values);

}  // namespace netspread
