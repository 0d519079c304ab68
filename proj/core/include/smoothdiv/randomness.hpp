#pragma once

#include <vector>

#include "smoothdiv/conic_divergences.hpp"

namespace smoothdiv {

/// Classical-quantum state sum_x p(x) |x><x| (x) rho_B^x.
struct CqState {
  std::vector<double> probs;
  std::vector<DensityOperator> conditionals;
  bool uniform = false;

  int classical_dim() const { return static_cast<int>(probs.size()); }
  int quantum_dim() const { return conditionals.empty() ? 0 : conditionals.front().dim(); }
  BipartiteLabel label() const { return {classical_dim(), quantum_dim()}; }
  /// Assembled joint operator, block diagonal in the classical basis.
  DensityOperator joint() const;
};

/// Maximally classically correlated state (1/d) sum_i |ii><ii| on d x d.
DensityOperator max_classically_correlated(int d);
/// Maximally entangled state (1/d) sum_ij |ii><jj| on d x d.
Matrix maximally_entangled(int d);

struct IsotropicState {
  DensityOperator state;
  BipartiteLabel label;
};

/// Isotropic state (1-p) Phi^d + p I/d^2.
IsotropicState isotropic_state(int d, double p);

/// Measure system A in the computational basis; conditionals renormalized.
CqState dephase_to_cq(const DensityOperator& rho_ab, const BipartiteLabel& label);

/// One-shot distillable-randomness lower bound for uniform cq states:
/// floor( I^{eps-eta}_min(X;B) - log2(4 eps / eta^2) ). Pass eta <= 0 for the
/// single-copy default eta = eps/2. May be negative; reported as-is.
double one_shot_lower(const CqState& cq, double eps, double eta = -1.0,
                      const SolverOptions& opts = {});

/// Explicit one-shot bound at n copies (n <= 3; product dimension guarded at
/// 4096), with eta = min(1/sqrt(n), eps/2).
double one_shot_lower_copies(const CqState& cq, double eps, int n, const SolverOptions& opts = {});

struct RateBound {
  long long n = 1;
  double lower_bits_per_copy = 0.0;
  double upper_bits_per_copy = 0.0;
  double eps = 0.0;
  bool lower_valid = true; // false when the dephased state is not uniform cq
};

/// Two-term rate curves for a cq state: upper and matched lower coincide.
std::vector<RateBound> rate_curves(const CqState& cq, double eps, const std::vector<long long>& n_list);

/// Two-term rate curves for a bipartite quantum state. The upper curve uses
/// the product-state relaxation sigma = rho_A (x) rho_B; the lower curve is
/// the computational-basis-dephased cq curve when that cq state is uniform.
std::vector<RateBound> rate_curves(const DensityOperator& rho_ab, const BipartiteLabel& label,
                                   double eps, const std::vector<long long>& n_list);

/// Generic resource-theory two-term upper bound over a finite free set:
/// min_sigma D(rho||sigma) + sqrt(V_sel/n) Phi^-1(eps), with the variance
/// taken as inf over the argmin set when eps >= 1/2 and sup when eps < 1/2
/// (ties within 1e-9 of the minimum enter the argmin set).
double generic_resource_bound(const DensityOperator& rho, const std::vector<Matrix>& free_states,
                              double eps, long long n);

} // namespace smoothdiv
