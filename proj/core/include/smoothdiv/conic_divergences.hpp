#pragma once

#include "smoothdiv/divergences.hpp"
#include "smoothdiv/solver.hpp"

namespace smoothdiv {

struct RootFidelityResult {
  double primal; // sup Re Tr[X] over [[rho, X],[X^dag, sigma]] >= 0
  double dual;   // (1/2) inf Tr[Y rho] + Tr[Z sigma] over [[Y, I],[I, Z]] >= 0
  double gap;
  Matrix witness_x;
  Matrix witness_y, witness_z; // dual-side witnesses
};

/// Root fidelity sqrt(F)(rho, sigma) through its primal/dual SDP pair.
RootFidelityResult root_fidelity_sdp(const Matrix& rho, const Matrix& sigma,
                                     const SolverOptions& opts = {});

struct HypothesisTestingResult {
  double bits;      // -log2 of the optimal type-II error
  double beta;      // optimal Tr[Lambda sigma]
  double beta_dual; // dual optimal of the same program
  double gap;
  Matrix witness_lambda; // clipped into [0, I] by spectral projection
};

/// Hypothesis-testing relative entropy D^eps_min(rho||sigma):
/// -log2 min Tr[Lambda sigma] s.t. 0 <= Lambda <= I, Tr[Lambda rho] >= 1-eps.
HypothesisTestingResult hypothesis_testing(const DensityOperator& rho, const Matrix& sigma,
                                           double eps, const SolverOptions& opts = {});

/// Smooth min-mutual information I^eps_min(A;B) = D^eps_min(rho_AB || rho_A x rho_B).
HypothesisTestingResult smooth_min_mutual_info(const DensityOperator& rho_ab,
                                               const BipartiteLabel& label, double eps,
                                               const SolverOptions& opts = {});

} // namespace smoothdiv
