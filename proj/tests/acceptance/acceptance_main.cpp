// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Every tolerance is pinned in code next to the check it gates.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "smoothdiv/asymptotics.hpp"
#include "smoothdiv/conic_divergences.hpp"
#include "smoothdiv/divergences.hpp"
#include "smoothdiv/oracles.hpp"
#include "smoothdiv/randomness.hpp"
#include "smoothdiv/smoothing.hpp"

using namespace smoothdiv;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  if (!pass) ++failures;
}

SeesawOptions light_seesaw(std::uint64_t seed) {
  SeesawOptions so;
  so.restarts = 2;
  so.max_iters = 12;
  so.seed = seed;
  return so;
}

double lower_bound(const DensityOperator& rho, const Matrix& sigma, double eps, std::uint64_t seed,
                   int restarts = 3) {
  SeesawOptions so = light_seesaw(seed);
  so.restarts = restarts;
  return seesaw_dminf_lower(rho, sigma, eps, so).result.value_bits;
}

double upper_bound(const DensityOperator& rho, const Matrix& sigma, double eps, int grid = 12) {
  return dminf_upper(rho, sigma, eps, default_delta_grid(eps, grid)).upper_bits;
}

// 1. Self-smoothing saturation (Property 5 equality at rho = sigma).
void criterion_1() {
  Timer timer;
  Rng rng(1001);
  double worst_lower = 0.0, worst_upper = 0.0;
  bool pass = true;
  for (int i = 0; i < 20; ++i) {
    const int dim = 2 + i % 3;
    DensityOperator omega = random_state(rng, dim);
    for (double eps : {0.1, 0.5}) {
      const double target = std::log2(1.0 / (1.0 - eps));
      SeesawOptions so = light_seesaw(100 + i);
      so.restarts = 1; // the deterministic (1-eps) rho seed saturates exactly
      so.max_iters = 8;
      const double lower = seesaw_dminf_lower(omega, omega.matrix(), eps, so).result.value_bits;
      const double upper = upper_bound(omega, omega.matrix(), eps, 16);
      worst_lower = std::max(worst_lower, target - lower);
      worst_upper = std::max(worst_upper, target - upper);
      pass = pass && lower >= target - 1e-3 && upper >= target - 1e-6;
    }
  }
  const double secs = timer.seconds();
  pass = pass && secs < 60.0;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "max lower deficit %.2e, max upper deficit %.2e, %.1f s",
                worst_lower, worst_upper, secs);
  report(1, "self-smoothing saturation", pass, buf);
}

// 2. Strong duality across the five SDP families.
void criterion_2() {
  Rng rng(1002);
  std::uniform_real_distribution<double> ueps(0.05, 0.8);
  double worst = 0.0;
  bool pass = true;
  for (int i = 0; i < 20; ++i) {
    const int dim = 2 + i % 3;
    DensityOperator rho = random_state(rng, dim);
    Matrix sigma = random_psd(rng, dim);
    const double eps = ueps(rng);

    worst = std::max(worst, smooth_dmax(rho, sigma, eps, SmoothingSet::subnormalized).gap);
    worst = std::max(worst, smooth_dmax(rho, sigma, eps, SmoothingSet::normalized).gap);

    const int da = 2, db = dim == 2 ? 2 : dim == 3 ? 2 : 2;
    DensityOperator rho_ab = random_state(rng, da * db);
    worst = std::max(worst, smooth_hmin(rho_ab, BipartiteLabel(da, db), eps).gap);

    worst = std::max(worst, root_fidelity_sdp(random_psd(rng, dim), random_psd(rng, dim)).gap);
    worst = std::max(worst, hypothesis_testing(rho, sigma, eps).gap);
  }
  pass = worst <= 1e-6;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "100 programs, worst primal/dual gap %.2e", worst);
  report(2, "SDP strong duality", pass, buf);
}

// 3. Root-fidelity SDP against the spectral fidelity.
void criterion_3() {
  Rng rng(1003);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int dim = 2 + i % 3;
    Matrix a = random_psd(rng, dim), b = random_psd(rng, dim);
    RootFidelityResult r = root_fidelity_sdp(a, b);
    const double exact = root_fidelity(a, b);
    worst = std::max({worst, std::abs(r.primal - exact), std::abs(r.dual - exact)});
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "100 pairs, worst |SDP - spectral| %.2e", worst);
  report(3, "fidelity cross-check", worst <= 1e-7, buf);
}

// 4. Hypothesis-testing SDP against the classical Neyman-Pearson oracle.
void criterion_4() {
  Rng rng(1004);
  std::uniform_real_distribution<double> umass(0.05, 1.0), ueps(0.0, 0.9);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const int m = 2 + i % 5; // alphabet <= 6
    std::vector<double> pv(m), qv(m);
    double ps = 0, qs = 0;
    for (int k = 0; k < m; ++k) {
      pv[k] = umass(rng);
      qv[k] = umass(rng);
      ps += pv[k];
      qs += qv[k];
    }
    Matrix pd = Matrix::Zero(m, m), qd = Matrix::Zero(m, m);
    for (int k = 0; k < m; ++k) {
      pv[k] /= ps;
      qv[k] /= qs;
      pd(k, k) = pv[k];
      qd(k, k) = qv[k];
    }
    const double eps = ueps(rng);
    const double np =
        oracle::neyman_pearson(oracle::ClassicalDistribution(pv), oracle::ClassicalDistribution(qv), eps)
            .bits;
    SolverOptions tight;
    tight.tol_abs = 1e-10;
    tight.tol_rel = 1e-10;
    const double sdp = hypothesis_testing(make_density(pd, StateKind::normalized), qd, eps, tight).bits;
    worst = std::max(worst, std::abs(np - sdp));
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "200 diagonal instances, worst |SDP - NP| %.2e bits", worst);
  report(4, "classical oracle equivalence", worst <= 1e-6, buf);
}

// 5. Second-order convergence of the iid Neyman-Pearson rate.
void criterion_5() {
  Timer timer;
  oracle::ClassicalDistribution p({0.5, 0.5}), q({0.9, 0.1});
  Matrix pd = Matrix::Zero(2, 2), qd = Matrix::Zero(2, 2);
  pd(0, 0) = pd(1, 1) = 0.5;
  qd(0, 0) = 0.9;
  qd(1, 1) = 0.1;
  DensityOperator rho = make_density(pd, StateKind::normalized);

  bool pass = true;
  double worst_resid = 0.0, worst_ratio = 0.0;
  for (double eps : {0.2, 0.8}) {
    auto residual = [&](long long n) {
      const double exact = oracle::iid_neyman_pearson(p, q, n, eps) / n;
      const double two_term = second_order(rho, qd, eps, n, ExpansionTarget::hypothesis).value_per_copy;
      return std::abs(exact - two_term);
    };
    // the remainder constant is fitted at n=200 and validated at larger n
    // with a 1.25 fit-slack factor absorbing the non-monotone O(1/n) term
    const double c_fit = residual(200) * 200.0 / std::log2(200.0);
    for (long long n : {500LL, 1000LL, 2000LL}) {
      const double r = residual(n);
      worst_resid = std::max(worst_resid, r);
      const double bound = 1.25 * c_fit * std::log2(static_cast<double>(n)) / n;
      worst_ratio = std::max(worst_ratio, r / bound);
      pass = pass && r <= 0.02 && r <= bound;
    }
  }
  const double secs = timer.seconds();
  pass = pass && secs < 120.0;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "worst residual %.4f bits, worst fitted-bound ratio %.2f, %.1f s",
                worst_resid, worst_ratio, secs);
  report(5, "second-order convergence", pass, buf);
}

// 6. Theorem-3 property suite at the bracket level.
void criterion_6() {
  Timer timer;
  Rng rng(1006);
  std::uniform_real_distribution<double> ueps(0.1, 0.6), unit(0.0, 1.0);
  double worst = 0.0; // most negative slack observed
  auto note = [&](double slack) { worst = std::min(worst, slack); };
  bool pass = true;

  for (int i = 0; i < 100; ++i) {
    DensityOperator rho = random_state(rng, 2);
    DensityOperator sig_state = random_state(rng, 2);
    Matrix sigma = sig_state.matrix();
    QuantumChannel chan = random_channel(rng, 2, 2);
    const double eps = ueps(rng);

    SeesawOptions so = light_seesaw(2000 + i);
    auto low = seesaw_dminf_lower(rho, sigma, eps, so);
    const double lower = low.result.value_bits;
    const double upper = upper_bound(rho, sigma, eps);

    // P1 scaling: exact when re-evaluated from the rescaled witness
    {
      const double c = 0.5 + 2.0 * unit(rng);
      const Matrix& w = low.result.witness_state.matrix();
      const double v1 = -std::log2(fidelity(w, sigma));
      const double v2 = -std::log2(fidelity(w, Matrix(c * sigma)));
      const double dev = std::abs(v2 - (v1 - std::log2(c)));
      pass = pass && dev <= 1e-9;
      note(-dev);
    }
    // P2 monotonicity in eps
    {
      const double eps2 = eps + (1.0 - eps) * 0.5 * unit(rng);
      const double upper2 = upper_bound(rho, sigma, eps2);
      note(upper2 - lower);
      pass = pass && lower <= upper2 + 1e-6;
    }
    // P3 superadditivity
    {
      DensityOperator rho2 = random_state(rng, 2);
      DensityOperator sig2 = random_state(rng, 2);
      const double eps2 = ueps(rng);
      const double lower2 = lower_bound(rho2, sig2.matrix(), eps2, 3000 + i);
      DensityOperator rr = make_density(tensor(rho.matrix(), rho2.matrix()), StateKind::normalized);
      Matrix ss = tensor(sigma, sig2.matrix());
      const double eps12 = eps + eps2 - eps * eps2;
      const double upper12 = upper_bound(rr, ss, eps12, 12);
      note(upper12 - lower - lower2);
      pass = pass && lower + lower2 <= upper12 + 1e-6;
    }
    // P5 non-negativity floor
    {
      note(upper - std::log2(1.0 / (1.0 - eps)));
      pass = pass && upper >= std::log2(1.0 / (1.0 - eps)) - 1e-6;
    }
    // P6 operator anti-monotonicity
    {
      Matrix sigma_big = sigma + random_psd(rng, 2);
      const double lower_big = lower_bound(rho, sigma_big, eps, 4000 + i);
      note(upper - lower_big);
      pass = pass && lower_big <= upper + 1e-6;
    }
    // P7 zero-error sandwich
    {
      note(upper - d_min_f(rho, sigma).bits);
      pass = pass && d_min_f(rho, sigma).bits <= upper + 1e-6;
      const double f_hat = fidelity(rho.matrix(), Matrix(sigma / sigma.trace().real()));
      if (eps <= f_hat) {
        const double g = g_bound(eps, rho, sigma);
        note(g - lower);
        pass = pass && lower <= g + 1e-6;
      }
    }
    // Theorem 2 data processing
    {
      DensityOperator nrho = apply_channel(chan, rho);
      Matrix nsigma = apply_channel(chan, sigma);
      const double lower_n = lower_bound(nrho, nsigma, eps, 5000 + i);
      note(upper - lower_n);
      pass = pass && lower_n <= upper + 1e-6;
    }
    // P4 convexity in the second argument
    {
      DensityOperator sig_b = random_state(rng, 2);
      const double pmix = unit(rng);
      Matrix mix = pmix * sigma + (1.0 - pmix) * sig_b.matrix();
      const double lower_mix = lower_bound(rho, mix, eps, 6000 + i);
      const double upper_b = upper_bound(rho, sig_b.matrix(), eps);
      const double rhs = pmix * upper + (1.0 - pmix) * upper_b;
      note(rhs - lower_mix);
      pass = pass && lower_mix <= rhs + 1e-6;
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "100 draws x 8 properties, most negative slack %.2e, %.1f s", worst,
                timer.seconds());
  report(6, "Theorem-3 property suite", pass, buf);
}

// 7. Cross-quantity inequalities against the certified bracket sides.
void criterion_7() {
  Rng rng(1007);
  std::uniform_real_distribution<double> ueps(0.1, 0.6), unit(0.0, 1.0);
  double worst = 0.0;
  auto note = [&](double slack) { worst = std::min(worst, slack); };
  bool pass = true;

  for (int i = 0; i < 100; ++i) {
    const int dim = 2 + i % 2;
    DensityOperator rho = random_state(rng, dim);
    Matrix sigma = random_psd(rng, dim);
    const double eps = ueps(rng);
    const double lower = lower_bound(rho, sigma, eps, 7000 + i);
    const double upper = upper_bound(rho, sigma, eps);

    // Cor. 6: sandwiched beta plus the smoothing credit dominates the lower bound
    for (double beta : {1.5, 3.0}) {
      const double lhs = sandwiched_renyi(rho, sigma, beta).bits +
                         beta / (beta - 1.0) * std::log2(1.0 / (1.0 - eps));
      note(lhs - lower);
      pass = pass && lhs >= lower - 1e-6;
    }
    // Eq. (34): d_max variant
    {
      const double lhs = d_max(rho, sigma).bits + std::log2(1.0 / (1.0 - eps));
      note(lhs - lower);
      pass = pass && lhs >= lower - 1e-6;
    }
    // Cor. 8: smooth-dmax bound at (eps1, eps2) = (u (1-eps), eps)
    {
      const double eps1 = unit(rng) * (1.0 - eps) * 0.9;
      const double root = std::sqrt(eps1) * std::sqrt(1.0 - eps) + std::sqrt(1.0 - eps1) * std::sqrt(eps);
      const double eps_prime = root * root;
      if (eps_prime < 1.0 - 1e-9) {
        const double lhs = smooth_dmax(rho, sigma, eps1, SmoothingSet::subnormalized).value_bits +
                           std::log2(1.0 / (1.0 - eps_prime));
        note(lhs - lower);
        pass = pass && lhs >= lower - 1e-6;
      }
    }
    // Prop. 7: hypothesis testing against the upper bracket
    {
      const double lhs = upper + std::log2(1.0 / (1.0 - eps));
      const double rhs = hypothesis_testing(rho, sigma, eps).bits;
      note(lhs - rhs);
      pass = pass && rhs <= lhs + 1e-6;
    }
    // Appendix-B Prop. 8: hypothesis testing at eps against the bracket at eps(2-eps)
    {
      const double smoothed = eps * (2.0 - eps);
      const double lhs = upper_bound(rho, sigma, smoothed);
      const double rhs = hypothesis_testing(rho, sigma, eps).bits;
      note(lhs - rhs);
      pass = pass && rhs <= lhs + 1e-6;
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "100 draws, most negative slack %.2e", worst);
  report(7, "cross-quantity inequalities", pass, buf);
}

// 8. Fig. 3 replication for the isotropic state.
void criterion_8() {
  IsotropicState iso = isotropic_state(2, 0.3);
  const double eps = 1e-4;

  // independent oracles: binary entropy for the dephased lower asymptote and
  // the closed-form isotropic spectrum for the quantum mutual information
  const double lower_asym_oracle = 1.0 - oracle::binary_entropy_bits(0.15);
  const double lam_top = 0.7 + 0.3 / 4.0, lam_rest = 0.3 / 4.0;
  const double s_ab = -(lam_top * std::log2(lam_top) + 3.0 * lam_rest * std::log2(lam_rest));
  const double upper_asym_oracle = 2.0 - s_ab;

  CqState cq = dephase_to_cq(iso.state, iso.label);
  auto [lower_asym, lv] = mutual_information_and_variance(cq.joint(), cq.label());
  auto [upper_asym, uv] = mutual_information_and_variance(iso.state, iso.label);

  bool pass = std::abs(lower_asym - lower_asym_oracle) <= 1e-6 &&
              std::abs(upper_asym - upper_asym_oracle) <= 1e-6;

  std::vector<long long> ns;
  for (int k = 0; k <= 40; ++k)
    ns.push_back(static_cast<long long>(std::llround(std::pow(10.0, 2.0 + 0.1 * k))));
  auto curves = rate_curves(iso.state, iso.label, eps, ns);
  double prev = -1e9;
  for (const auto& rb : curves) {
    pass = pass && rb.lower_valid && rb.lower_bits_per_copy > prev &&
           rb.lower_bits_per_copy < lower_asym;
    prev = rb.lower_bits_per_copy;
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "asymptotes %.7f / %.7f vs oracles %.7f / %.7f", lower_asym,
                upper_asym, lower_asym_oracle, upper_asym_oracle);
  report(8, "Fig. 3 replication", pass, buf);
}

// 9. Fig. 4/5-style bracket sweeps at dims 2 and 4.
void criterion_9() {
  Timer timer;
  bool pass = true;
  double worst_mono = 0.0;
  for (int dim : {2, 4}) {
    Rng rng(dim == 2 ? 424 : 545);
    DensityOperator rho = random_state(rng, dim);
    DensityOperator sig = random_state(rng, dim);
    double prev_lower = -1e9;
    for (int k = 0; k < 10; ++k) {
      const double eps = 0.05 + 0.05 * k;
      BracketOptions bo;
      bo.seesaw.seed = 11 * dim + k;
      Bracket b = bracket_dminf(rho, sig.matrix(), eps, bo);
      pass = pass && b.upper_bits >= b.lower_bits;
      worst_mono = std::min(worst_mono, b.lower_bits - prev_lower);
      pass = pass && b.lower_bits >= prev_lower - 1e-4;
      prev_lower = b.lower_bits;
    }
  }
  const double secs = timer.seconds();
  pass = pass && secs < 600.0;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "dims 2 and 4, worst monotonicity slack %.2e, %.1f s", worst_mono,
                secs);
  report(9, "bracket sweeps", pass, buf);
}

// 10. Lemma-14 bound on fidelity with subnormalized product states.
void criterion_10() {
  Rng rng(1010);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  bool pass = true;
  double worst = 0.0;
  for (int d : {2, 3, 4}) {
    DensityOperator phi = max_classically_correlated(d);
    double max_f = 0.0;
    for (int s = 0; s < 500; ++s) {
      Matrix a = (0.05 + 0.95 * unit(rng)) * random_state(rng, d).matrix();
      Matrix b = (0.05 + 0.95 * unit(rng)) * random_state(rng, d).matrix();
      max_f = std::max(max_f, fidelity(phi.matrix(), tensor(a, b)));
    }
    worst = std::max(worst, max_f - 1.0 / d);
    pass = pass && max_f <= 1.0 / d + 1e-9;
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "500 samples per d in {2,3,4}, worst excess over 1/d: %.2e", worst);
  report(10, "Lemma-14 bound", pass, buf);
}

} // namespace

int main(int argc, char** argv) {
  Timer total;
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  auto want = [&](int id) { return only == 0 || only == id; };
  if (want(1)) criterion_1();
  if (want(2)) criterion_2();
  if (want(3)) criterion_3();
  if (want(4)) criterion_4();
  if (want(5)) criterion_5();
  if (want(6)) criterion_6();
  if (want(7)) criterion_7();
  if (want(8)) criterion_8();
  if (want(9)) criterion_9();
  if (want(10)) criterion_10();
  std::printf("acceptance: %d criterion(s) failed, %.1f s total\n", failures, total.seconds());
  return failures == 0 ? 0 : 1;
}
