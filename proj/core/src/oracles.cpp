#include "smoothdiv/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "smoothdiv/conic.hpp"
#include "smoothdiv/conic_divergences.hpp"
#include "smoothdiv/smoothing.hpp"

namespace smoothdiv::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_sum_exp(const std::vector<double>& logs) {
  double m = -kInf;
  for (double l : logs) m = std::max(m, l);
  if (m == -kInf) return -kInf;
  double s = 0.0;
  for (double l : logs) s += std::exp(l - m);
  return m + std::log(s);
}

struct TypeClass {
  double log_p; // natural log of the class p-mass (-inf allowed)
  double log_q;
  double log_ratio() const {
    if (log_p == -kInf) return -kInf;
    if (log_q == -kInf) return kInf;
    return log_p - log_q;
  }
};

// Greedy fill of p-mass to exactly 1-eps over ratio-sorted classes; returns
// log2 of the accumulated q-mass (-inf when it vanishes).
double greedy_log2_beta(std::vector<TypeClass> classes, double eps) {
  std::stable_sort(classes.begin(), classes.end(),
                   [](const TypeClass& a, const TypeClass& b) { return a.log_ratio() > b.log_ratio(); });
  double remaining = 1.0 - eps;
  std::vector<double> selected_log_q;
  for (const auto& cls : classes) {
    if (remaining <= 1e-15) break;
    if (cls.log_p == -kInf && cls.log_q == -kInf) continue;
    const double mass_p = cls.log_p == -kInf ? 0.0 : std::exp(cls.log_p);
    if (mass_p <= remaining + 1e-15) {
      if (cls.log_q != -kInf) selected_log_q.push_back(cls.log_q);
      remaining -= mass_p;
    } else {
      const double t = remaining / mass_p;
      if (cls.log_q != -kInf) selected_log_q.push_back(cls.log_q + std::log(t));
      remaining = 0.0;
    }
  }
  const double lse = log_sum_exp(selected_log_q);
  return lse == -kInf ? -kInf : lse / std::log(2.0);
}

} // namespace

ClassicalDistribution::ClassicalDistribution(std::vector<double> m) : masses(std::move(m)) {
  if (masses.empty()) throw DomainError("ClassicalDistribution: need at least one outcome");
  double sum = 0.0;
  for (double& v : masses) {
    if (v < -1e-12) throw DomainError("ClassicalDistribution: negative mass");
    v = std::max(v, 0.0);
    sum += v;
  }
  if (sum > 1.0 + 1e-9) throw DomainError("ClassicalDistribution: masses sum to more than one");
}

double ClassicalDistribution::total() const {
  return std::accumulate(masses.begin(), masses.end(), 0.0);
}

NeymanPearsonResult neyman_pearson(const ClassicalDistribution& p, const ClassicalDistribution& q,
                                   double eps) {
  if (p.size() != q.size()) throw DomainError("neyman_pearson: alphabet sizes differ");
  if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("neyman_pearson: eps must lie in [0,1)");
  if (std::abs(p.total() - 1.0) > 1e-9) throw DomainError("neyman_pearson: p must be normalized");

  const std::size_t m = p.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  auto ratio = [&](std::size_t i) {
    if (p.masses[i] == 0.0) return -kInf;
    if (q.masses[i] == 0.0) return kInf;
    return std::log(p.masses[i]) - std::log(q.masses[i]);
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ratio(a) > ratio(b); });

  // equal-ratio outcomes are one merged class; any split is optimal and
  // merging keeps the test deterministic
  NeymanPearsonResult out;
  out.test.assign(m, 0.0);
  double remaining = 1.0 - eps;
  double beta = 0.0;
  std::size_t i = 0;
  while (i < m && remaining > 1e-15) {
    std::size_t j = i;
    double class_p = 0.0, class_q = 0.0;
    const double r = ratio(order[i]);
    while (j < m && ratio(order[j]) == r) {
      class_p += p.masses[order[j]];
      class_q += q.masses[order[j]];
      ++j;
    }
    double t = 1.0;
    if (class_p > remaining + 1e-15) t = remaining / class_p;
    for (std::size_t k = i; k < j; ++k) out.test[order[k]] = t;
    beta += t * class_q;
    remaining -= t * class_p;
    i = j;
  }
  out.log2_beta = beta > 0.0 ? std::log2(beta) : -kInf;
  out.bits = beta > 0.0 ? -std::log2(beta) : kInf;
  return out;
}

namespace {

double log_binomial(long long n, long long k) { return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0); }

double safe_log(double x) { return x > 0.0 ? std::log(x) : -kInf; }

double iid_binary(const std::vector<double>& p, const std::vector<double>& q, long long n, double eps) {
  std::vector<TypeClass> classes;
  classes.reserve(n + 1);
  const double lp0 = safe_log(p[0]), lp1 = safe_log(p[1]);
  const double lq0 = safe_log(q[0]), lq1 = safe_log(q[1]);
  for (long long k = 0; k <= n; ++k) {
    const double lc = log_binomial(n, k);
    TypeClass c;
    c.log_p = (lp0 == -kInf && k > 0) || (lp1 == -kInf && k < n) ? -kInf : lc + k * lp0 + (n - k) * lp1;
    c.log_q = (lq0 == -kInf && k > 0) || (lq1 == -kInf && k < n) ? -kInf : lc + k * lq0 + (n - k) * lq1;
    classes.push_back(c);
  }
  const double l2b = greedy_log2_beta(std::move(classes), eps);
  return l2b == -kInf ? kInf : -l2b;
}

void enumerate_compositions(long long n, int parts, std::vector<long long>& current,
                            const std::function<void(const std::vector<long long>&)>& emit) {
  if (parts == 1) {
    current.push_back(n);
    emit(current);
    current.pop_back();
    return;
  }
  for (long long k = 0; k <= n; ++k) {
    current.push_back(k);
    enumerate_compositions(n - k, parts - 1, current, emit);
    current.pop_back();
  }
}

double iid_multinomial(const std::vector<double>& p, const std::vector<double>& q, long long n,
                       double eps) {
  const int m = static_cast<int>(p.size());
  std::vector<TypeClass> classes;
  std::vector<long long> current;
  const double lfact_n = std::lgamma(n + 1.0);
  enumerate_compositions(n, m, current, [&](const std::vector<long long>& counts) {
    double lc = lfact_n;
    for (long long k : counts) lc -= std::lgamma(k + 1.0);
    TypeClass c{lc, lc};
    for (int i = 0; i < m; ++i) {
      if (counts[i] == 0) continue;
      const double lpi = safe_log(p[i]), lqi = safe_log(q[i]);
      c.log_p = lpi == -kInf ? -kInf : c.log_p + counts[i] * lpi;
      c.log_q = lqi == -kInf ? -kInf : c.log_q + counts[i] * lqi;
    }
    classes.push_back(c);
  });
  const double l2b = greedy_log2_beta(std::move(classes), eps);
  return l2b == -kInf ? kInf : -l2b;
}

} // namespace

double iid_neyman_pearson(const ClassicalDistribution& p, const ClassicalDistribution& q, long long n,
                          double eps) {
  if (p.size() != q.size()) throw DomainError("iid_neyman_pearson: alphabet sizes differ");
  if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("iid_neyman_pearson: eps must lie in [0,1)");
  if (std::abs(p.total() - 1.0) > 1e-9) throw DomainError("iid_neyman_pearson: p must be normalized");
  if (n < 1) throw DomainError("iid_neyman_pearson: n must be >= 1");
  if (p.size() == 2) {
    if (n > 5000) throw TooLarge("iid_neyman_pearson: binary alphabets support n <= 5000");
    return iid_binary(p.masses, q.masses, n, eps);
  }
  if (p.size() <= 4 && n <= 12) return iid_multinomial(p.masses, q.masses, n, eps);
  throw TooLarge("iid_neyman_pearson: alphabet <= 4 requires n <= 12");
}

double kl_bits(const std::vector<double>& p, const std::vector<double>& q) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return kInf;
    d += p[i] * std::log2(p[i] / q[i]);
  }
  return d;
}

double kl_variance_bits(const std::vector<double>& p, const std::vector<double>& q) {
  const double d = kl_bits(p, q);
  if (!std::isfinite(d)) throw SupportViolation("kl_variance_bits: support violation");
  double second = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    const double l = std::log2(p[i] / q[i]);
    second += p[i] * l * l;
  }
  return std::max(second - d * d, 0.0);
}

double renyi_bits(const std::vector<double>& p, const std::vector<double>& q, double alpha) {
  if (!(alpha > 0.0) || alpha == 1.0) throw BadAlpha("renyi_bits: alpha in (0,1) or (1,inf)");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) {
      if (alpha > 1.0) return kInf;
      continue;
    }
    s += std::pow(p[i], alpha) * std::pow(q[i], 1.0 - alpha);
  }
  if (s <= 0.0) return kInf;
  return std::log2(s) / (alpha - 1.0);
}

double bhattacharyya_fidelity(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::sqrt(std::max(p[i], 0.0) * std::max(q[i], 0.0));
  return s * s;
}

double binary_entropy_bits(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binary_entropy_bits: p in [0,1]");
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

namespace {

Matrix clip_psd(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint().eval()));
  RealVector ev = es.eigenvalues();
  for (int i = 0; i < ev.size(); ++i) ev(i) = std::max(ev(i), 0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

// enforce exact feasibility: PSD, F(cand, rho) >= 1-eps (equality face when
// reachable by scaling), trace <= 1; returns empty on failure
std::optional<Matrix> feasible_candidate(const Matrix& raw, const DensityOperator& rho, double eps) {
  Matrix cand = clip_psd(raw);
  double f = fidelity(cand, rho.matrix());
  if (f <= 0.0) return std::nullopt;
  const double c = (1.0 - eps) / f;
  Matrix scaled = c * cand;
  if (scaled.trace().real() > 1.0 + 1e-12) {
    if (f >= 1.0 - eps && cand.trace().real() <= 1.0 + 1e-12) return cand;
    return std::nullopt;
  }
  return scaled;
}

// one rho-tilde-block polish: fix Y from the root-fidelity dual at the
// candidate, re-optimize the bilinear objective over (rho_tilde, X, Z)
Matrix polish_block(const Matrix& y_fixed, const DensityOperator& rho, const Matrix& sigma,
                    double eps, const SolverOptions& opts) {
  const int d = rho.dim();
  ConicProgram p;
  int g = p.add_hermitian("G", 2 * d);
  int z = p.add_hermitian("Z", d);
  p.pin_principal_subblock(g, d, rho.matrix());
  p.add_psd(p.var_expr(g));
  BlockBuilder bb({d, d});
  bb.set(0, 0, MatrixExpr::constant_matrix(y_fixed));
  bb.set(1, 1, p.var_expr(z));
  bb.set(0, 1, MatrixExpr::constant_matrix(Matrix::Identity(d, d)));
  p.add_psd(bb.build());
  LinearExpr fid = p.re_trace_offdiag_subblock(g, 0, d, d);
  fid.constant = -std::sqrt(1.0 - eps);
  p.add_ge(fid);
  LinearExpr tr = p.trace_principal_subblock(g, 0, d);
  tr *= -1.0;
  tr.constant = 1.0;
  p.add_ge(tr);
  Matrix y_pad = Matrix::Zero(2 * d, 2 * d);
  y_pad.topLeftCorner(d, d) = y_fixed;
  LinearExpr obj = p.inner_product(g, y_pad);
  obj += p.inner_product(z, sigma);
  obj *= 0.5;
  p.set_objective(Sense::minimize, obj);
  SolverOptions lenient = opts;
  lenient.max_iterations = std::min(opts.max_iterations, 200);
  lenient.tol_abs = std::max(opts.tol_abs, 1e-6);
  lenient.tol_rel = std::max(opts.tol_rel, 1e-6);
  ConicSolution s = solve(p, lenient);
  if (s.status == SolveStatus::infeasible || s.status == SolveStatus::unbounded)
    throw SolverFailure("multistart polish: solver returned " + to_string(s.status));
  return s.witness(p, g).block(0, 0, d, d);
}

} // namespace

double multistart_dminf(const DensityOperator& rho, const Matrix& sigma, double eps, int samples,
                        std::uint64_t seed, const SolverOptions& opts) {
  if (samples < 1) throw DomainError("multistart_dminf: samples must be >= 1");
  if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("multistart_dminf: eps must lie in [0,1)");
  const int d = rho.dim();
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Local polish: alternate the rho-tilde block SDP until the certified value
  // stops improving. Every candidate value is recomputed spectrally from a
  // feasible point, so the returned bound stands regardless of solver state.
  auto polish_from = [&](Matrix cand) {
    double value = -kInf;
    try {
      for (int it = 0; it < 30; ++it) {
        RootFidelityResult rf = root_fidelity_sdp(clip_psd(cand), sigma, opts);
        Matrix polished = polish_block(rf.witness_y, rho, sigma, eps, opts);
        auto feasible = feasible_candidate(polished, rho, eps);
        if (!feasible) break;
        const double f_sigma = fidelity(*feasible, sigma);
        if (f_sigma <= 0.0) break;
        const double bits = -std::log2(f_sigma);
        cand = *feasible;
        if (bits <= value + 1e-9) {
          value = std::max(value, bits);
          break;
        }
        value = bits;
      }
    } catch (const SolverFailure&) {
      // polish is best-effort; the sampled bound stands on its own
    }
    return value;
  };

  // candidate list: rho itself, the deterministic rank-one seeds, then the
  // random mixes; every entry is certified spectrally before use
  std::vector<Matrix> raws;
  raws.push_back(rho.matrix());
  if (eps > 0.0)
    for (auto& cand : dminf_rank_one_candidates(rho, sigma, eps)) raws.push_back(std::move(cand));
  for (int s = 1; s < samples; ++s) {
    const double t = unit(rng) * eps;
    raws.push_back((1.0 - t) * rho.matrix() + t * random_pure_state(rng, d));
  }

  double best_bits = -kInf;
  for (const Matrix& raw : raws) {
    auto cand = feasible_candidate(raw, rho, eps);
    if (!cand) continue;
    const double f_sigma = fidelity(*cand, sigma);
    const double bits = f_sigma > 0.0 ? -std::log2(f_sigma) : kInf;
    best_bits = std::max(best_bits, bits);
    if (eps > 0.0 && std::isfinite(bits)) best_bits = std::max(best_bits, polish_from(*cand));
  }
  return best_bits;
}

} // namespace smoothdiv::oracle
