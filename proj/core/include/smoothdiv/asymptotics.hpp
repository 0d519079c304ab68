#pragma once

#include <string>

#include "smoothdiv/divergences.hpp"

namespace smoothdiv {

/// Standard normal CDF.
double gaussian_cdf(double a);
/// Standard normal quantile, bisection plus one Newton polish to 1e-12.
double gaussian_quantile(double eps);

/// Classical fidelity of two binary random variables with parameters eps and
/// eps + delta: [sqrt(eps) sqrt(eps+delta) + sqrt(1-eps-delta) sqrt(1-eps)]^2.
double f_eps_delta(double eps, double delta);

/// Zero-error upper-bound evaluator:
///   -log2[1 - (sqrt(eps) sqrt(F) + sqrt(1-F) sqrt(1-eps))^2] - log2 Tr[sigma],
/// F = F(rho, sigma/Tr[sigma]); requires eps <= F.
double g_bound(double eps, const DensityOperator& rho, const Matrix& sigma);

enum class ExpansionTarget { dminf, hypothesis, sandwiched };

/// Two-term second-order expansion. The O(log n / n) remainder is exposed as
/// a textual marker only; it is never added to the value.
struct ExpansionTerms {
  double first_order = 0.0;        // D(rho||sigma), bits
  double second_order_coeff = 0.0; // signed sqrt(V) Phi^-1(eps), bits
  long long n = 1;
  double value_per_copy = 0.0;     // first_order + second_order_coeff / sqrt(n)
  std::string remainder_note = "O(log n / n)";
};

/// Second-order expansion of the smoothed quantity per copy. The quantile
/// sign is +Phi^-1(eps) for dminf/hypothesis and sandwiched alpha in [1/2,1),
/// and -Phi^-1(eps) for sandwiched alpha > 1.
ExpansionTerms second_order(const DensityOperator& rho, const Matrix& sigma, double eps,
                            long long n, ExpansionTarget target, double alpha = 0.5);

enum class ModerateDirection { dminf, sandwiched_gt1, sandwiched_lt1 };

/// Moderate-deviation rate D -/+ sqrt(2V) a_n per copy (sign per direction).
double moderate_deviation(const DensityOperator& rho, const Matrix& sigma, double a_n,
                          ModerateDirection direction);

} // namespace smoothdiv
