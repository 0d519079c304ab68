#include "smoothdiv/asymptotics.hpp"

#include <cmath>

namespace smoothdiv {

double gaussian_cdf(double a) { return 0.5 * std::erfc(-a / std::sqrt(2.0)); }

double gaussian_quantile(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("gaussian_quantile: eps must lie in (0,1)");
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (gaussian_cdf(mid) <= eps) lo = mid;
    else hi = mid;
  }
  double x = 0.5 * (lo + hi);
  // one Newton polish with the density
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
  if (pdf > 1e-300) x -= (gaussian_cdf(x) - eps) / pdf;
  return x;
}

double f_eps_delta(double eps, double delta) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw DomainError("f_eps_delta: eps must lie in [0,1]");
  if (!(delta >= 0.0 && delta <= 1.0 - eps + 1e-15))
    throw DomainError("f_eps_delta: delta must lie in [0, 1-eps]");
  const double s = std::sqrt(eps) * std::sqrt(eps + delta) +
                   std::sqrt(std::max(1.0 - eps - delta, 0.0)) * std::sqrt(1.0 - eps);
  return std::min(s * s, 1.0);
}

double g_bound(double eps, const DensityOperator& rho, const Matrix& sigma) {
  const double tr = sigma.trace().real();
  if (tr <= 0.0) throw DomainError("g_bound: sigma has nonpositive trace");
  const double f = std::min(fidelity(rho.matrix(), Matrix(sigma / tr)), 1.0);
  if (!(eps >= 0.0 && eps <= f + 1e-12))
    throw DomainError("g_bound: eps must lie in [0, F(rho, sigma/Tr sigma)]");
  const double s = std::sqrt(eps) * std::sqrt(f) + std::sqrt(1.0 - f) * std::sqrt(1.0 - eps);
  const double g = s * s;
  if (g >= 1.0) return std::numeric_limits<double>::infinity();
  return -std::log2(1.0 - g) - std::log2(tr);
}

namespace {

// Shared hypotheses: supp(rho) inside supp(sigma) and V > 0.
std::pair<double, double> first_two_terms(const DensityOperator& rho, const Matrix& sigma) {
  DivergenceValue d = relative_entropy(rho, sigma);
  if (d.is_infinite()) throw SupportViolation("second_order: supp(rho) leaks out of supp(sigma)");
  DivergenceValue v = relative_entropy_variance(rho, sigma);
  if (v.bits < 1e-12) throw ZeroVariance("second_order: V(rho||sigma) = 0");
  return {d.bits, v.bits};
}

} // namespace

ExpansionTerms second_order(const DensityOperator& rho, const Matrix& sigma, double eps,
                            long long n, ExpansionTarget target, double alpha) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("second_order: eps must lie in (0,1)");
  if (n < 1) throw DomainError("second_order: n must be >= 1");
  auto [d, v] = first_two_terms(rho, sigma);
  double sign = 1.0;
  if (target == ExpansionTarget::sandwiched) {
    if (!(alpha >= 0.5) || alpha == 1.0)
      throw BadAlpha("second_order: sandwiched alpha must lie in [1/2,1) or (1,inf)");
    sign = alpha > 1.0 ? -1.0 : 1.0;
  }
  ExpansionTerms t;
  t.first_order = d;
  t.second_order_coeff = sign * std::sqrt(v) * gaussian_quantile(eps);
  t.n = n;
  t.value_per_copy = t.first_order + t.second_order_coeff / std::sqrt(static_cast<double>(n));
  return t;
}

double moderate_deviation(const DensityOperator& rho, const Matrix& sigma, double a_n,
                          ModerateDirection direction) {
  if (a_n < 0.0) throw DomainError("moderate_deviation: a_n must be nonnegative");
  auto [d, v] = first_two_terms(rho, sigma);
  const double sign = direction == ModerateDirection::sandwiched_gt1 ? 1.0 : -1.0;
  return d + sign * std::sqrt(2.0 * v) * a_n;
}

} // namespace smoothdiv
