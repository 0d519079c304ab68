#include "smoothdiv/randomness.hpp"

#include <cmath>

#include "smoothdiv/asymptotics.hpp"

namespace smoothdiv {

DensityOperator CqState::joint() const {
  const int dx = classical_dim(), db = quantum_dim();
  Matrix j = Matrix::Zero(dx * db, dx * db);
  for (int x = 0; x < dx; ++x)
    j.block(x * db, x * db, db, db) = probs[x] * conditionals[x].matrix();
  return make_density(j, StateKind::normalized);
}

DensityOperator max_classically_correlated(int d) {
  if (d < 2) throw DomainError("max_classically_correlated: d must be >= 2");
  Matrix m = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) m(i * d + i, i * d + i) = 1.0 / d;
  return make_density(m, StateKind::normalized);
}

Matrix maximally_entangled(int d) {
  Matrix m = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i * d + i, j * d + j) = 1.0 / d;
  return m;
}

IsotropicState isotropic_state(int d, double p) {
  if (d < 2) throw DomainError("isotropic_state: d must be >= 2");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("isotropic_state: p must lie in [0,1]");
  Matrix m = (1.0 - p) * maximally_entangled(d) +
             (p / (d * d)) * Matrix::Identity(d * d, d * d);
  return {make_density(m, StateKind::normalized), BipartiteLabel(d, d)};
}

CqState dephase_to_cq(const DensityOperator& rho_ab, const BipartiteLabel& label) {
  label.check(rho_ab.dim());
  const int da = label.dimA, db = label.dimB;
  CqState cq;
  cq.probs.reserve(da);
  cq.conditionals.reserve(da);
  for (int x = 0; x < da; ++x) {
    Matrix block = rho_ab.matrix().block(x * db, x * db, db, db);
    double px = block.trace().real();
    px = std::max(px, 0.0);
    cq.probs.push_back(px);
    if (px > 1e-14) {
      cq.conditionals.push_back(make_density(block / px, StateKind::normalized));
    } else {
      cq.conditionals.push_back(
          make_density(Matrix::Identity(db, db) / db, StateKind::normalized));
    }
  }
  cq.uniform = true;
  for (double px : cq.probs)
    if (std::abs(px - 1.0 / da) > 1e-9) cq.uniform = false;
  return cq;
}

double one_shot_lower(const CqState& cq, double eps, double eta, const SolverOptions& opts) {
  if (!cq.uniform) throw NonUniformInput("one_shot_lower: requires a uniform cq state");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("one_shot_lower: eps must lie in (0,1)");
  if (eta <= 0.0) eta = eps / 2.0;
  if (!(eta > 0.0 && eta < eps)) throw DomainError("one_shot_lower: need 0 < eta < eps");
  HypothesisTestingResult i_min = smooth_min_mutual_info(cq.joint(), cq.label(), eps - eta, opts);
  return std::floor(i_min.bits - std::log2(4.0 * eps / (eta * eta)));
}

double one_shot_lower_copies(const CqState& cq, double eps, int n, const SolverOptions& opts) {
  if (n < 1 || n > 3) throw TooLarge("one_shot_lower_copies: n must lie in 1..3");
  const int d = cq.classical_dim() * cq.quantum_dim();
  double dim_n = std::pow(static_cast<double>(d), n);
  if (dim_n > 4096.0) throw TooLarge("one_shot_lower_copies: product dimension exceeds 4096");
  CqState big = cq;
  if (n > 1) {
    // n-fold product of a cq state is again cq with product conditionals
    CqState out;
    std::vector<int> idx(n, 0);
    const int dx = cq.classical_dim();
    const int total = static_cast<int>(std::pow(dx, n));
    for (int code = 0; code < total; ++code) {
      int c = code;
      double p = 1.0;
      Matrix cond = Matrix::Identity(1, 1);
      for (int k = 0; k < n; ++k) {
        const int x = c % dx;
        c /= dx;
        p *= cq.probs[x];
        cond = tensor(cond, cq.conditionals[x].matrix());
      }
      out.probs.push_back(p);
      out.conditionals.push_back(make_density(cond, StateKind::normalized));
    }
    out.uniform = cq.uniform;
    big = std::move(out);
  }
  const double eta = std::min(1.0 / std::sqrt(static_cast<double>(n)), eps / 2.0);
  return one_shot_lower(big, eps, eta, opts);
}

namespace {

std::vector<RateBound> two_term_curves(double i_bits, double v_bits, double eps,
                                       const std::vector<long long>& n_list, bool lower_valid,
                                       double lower_i, double lower_v) {
  const double q = gaussian_quantile(eps);
  std::vector<RateBound> out;
  out.reserve(n_list.size());
  for (long long n : n_list) {
    if (n < 1) throw DomainError("rate_curves: n must be >= 1");
    RateBound rb;
    rb.n = n;
    rb.eps = eps;
    rb.upper_bits_per_copy = i_bits + std::sqrt(v_bits / n) * q;
    rb.lower_valid = lower_valid;
    rb.lower_bits_per_copy = lower_valid
                                 ? lower_i + std::sqrt(lower_v / n) * q
                                 : std::numeric_limits<double>::quiet_NaN();
    out.push_back(rb);
  }
  return out;
}

} // namespace

std::vector<RateBound> rate_curves(const CqState& cq, double eps, const std::vector<long long>& n_list) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("rate_curves: eps must lie in (0,1)");
  auto [i, v] = mutual_information_and_variance(cq.joint(), cq.label());
  if (v < 1e-12) throw ZeroVariance("rate_curves: mutual information variance is zero");
  // For uniform cq inputs the two leading terms of the upper and lower bounds
  // are the same formula; computed once so the match is bitwise.
  return two_term_curves(i, v, eps, n_list, cq.uniform, i, v);
}

std::vector<RateBound> rate_curves(const DensityOperator& rho_ab, const BipartiteLabel& label,
                                   double eps, const std::vector<long long>& n_list) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("rate_curves: eps must lie in (0,1)");
  auto [i, v] = mutual_information_and_variance(rho_ab, label);
  if (v < 1e-12) throw ZeroVariance("rate_curves: mutual information variance is zero");
  CqState cq = dephase_to_cq(rho_ab, label);
  bool lower_valid = cq.uniform;
  double li = 0.0, lv = 0.0;
  if (lower_valid) {
    auto [cli, clv] = mutual_information_and_variance(cq.joint(), cq.label());
    li = cli;
    lv = clv;
    if (lv < 1e-12) lower_valid = false;
  }
  return two_term_curves(i, v, eps, n_list, lower_valid, li, lv);
}

double generic_resource_bound(const DensityOperator& rho, const std::vector<Matrix>& free_states,
                              double eps, long long n) {
  if (free_states.empty()) throw EmptyFreeSet("generic_resource_bound: empty free set");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("generic_resource_bound: eps must lie in (0,1)");
  if (n < 1) throw DomainError("generic_resource_bound: n must be >= 1");

  std::vector<double> d_vals;
  d_vals.reserve(free_states.size());
  double d_min = std::numeric_limits<double>::infinity();
  for (const auto& sigma : free_states) {
    DivergenceValue d = relative_entropy(rho, sigma);
    d_vals.push_back(d.bits);
    d_min = std::min(d_min, d.bits);
  }
  if (!std::isfinite(d_min)) return std::numeric_limits<double>::infinity();

  // variance selector over the argmin set (ties within 1e-9 of the minimum)
  const bool take_inf = eps >= 0.5;
  double v_sel = take_inf ? std::numeric_limits<double>::infinity() : 0.0;
  for (std::size_t i = 0; i < free_states.size(); ++i) {
    if (d_vals[i] > d_min + 1e-9) continue;
    const double v = relative_entropy_variance(rho, free_states[i]).bits;
    v_sel = take_inf ? std::min(v_sel, v) : std::max(v_sel, v);
  }
  return d_min + std::sqrt(v_sel / n) * gaussian_quantile(eps);
}

} // namespace smoothdiv
