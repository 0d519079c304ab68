#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "smoothdiv/conic_divergences.hpp"

namespace smoothdiv {

enum class SmoothingSet { subnormalized, normalized };

/// Result of an optimization-defined smoothed quantity. The witness is
/// re-validated spectrally, independent of the solver: it lies in the
/// subnormalized set and satisfies F(witness, rho) >= 1 - eps - 1e-6.
struct SmoothingResult {
  double value_bits;
  DensityOperator witness_state;
  std::map<std::string, Matrix> aux_witnesses;
  SolveStatus status = SolveStatus::inaccurate;
  double gap = 0.0;       // worst of the stated primal/dual pair gap and internal solver gaps
  double dual_bits = 0.0; // value recomputed from the stated dual program

  SmoothingResult(double v, DensityOperator w) : value_bits(v), witness_state(std::move(w)) {}
};

/// Smooth max-relative entropy D^eps_max(rho||sigma) with fidelity smoothing
/// over subnormalized or normalized states. Solves the stated primal SDP for
/// the value and the stated dual SDP as a cross-check.
SmoothingResult smooth_dmax(const DensityOperator& rho, const Matrix& sigma, double eps,
                            SmoothingSet set, const SolverOptions& opts = {});

/// Smooth conditional min-entropy H^eps_min(A|B) via its primal/dual SDP pair.
/// The smoothing radius inside the program is eps^2 (purified-distance ball).
SmoothingResult smooth_hmin(const DensityOperator& rho_ab, const BipartiteLabel& label, double eps,
                            const SolverOptions& opts = {});

struct SeesawOptions {
  int restarts = 8;
  int max_iters = 50;
  double tol = 1e-7;
  std::uint64_t seed = 0;
  SolverOptions solver;
  /// Extra feasible starting candidates (e.g. the witness from a smaller eps
  /// when sweeping a grid); infeasible entries are ignored.
  std::vector<Matrix> warm_starts;
};

/// Objective trace of one seesaw restart; iterates a_k are nonincreasing.
struct SeesawTrace {
  int restart_id = 0;
  std::vector<double> iterates;
  bool converged = false;
  double best_value_bits = 0.0;
};

struct SeesawOutcome {
  SmoothingResult result;
  std::vector<SeesawTrace> traces;
};

/// Alternating block-SDP minimization of the bilinear program for the smooth
/// F-min-relative entropy. Every feasible iterate upper-bounds the bilinear
/// infimum a*, so the returned -2 log2(min a) is a certified lower bound on
/// D^eps_minF(rho||sigma).
SeesawOutcome seesaw_dminf_lower(const DensityOperator& rho, const Matrix& sigma, double eps,
                                 const SeesawOptions& opts = {});

struct UpperBoundResult {
  double upper_bits = 0.0;
  double delta_star = 0.0;
};

/// Upper bound min_delta D^{1-eps-delta}_max(rho||sigma) + log2 1/(1-f(eps,delta)).
UpperBoundResult dminf_upper(const DensityOperator& rho, const Matrix& sigma, double eps,
                             const std::vector<double>& delta_grid, const SolverOptions& opts = {});

/// 40 log-spaced points in [1e-4 (1-eps), 0.999 (1-eps)].
std::vector<double> default_delta_grid(double eps, int points = 40);

/// Deterministic rank-one seeds for the bilinear program: over the fidelity
/// ball the best rank-one candidate maximizes <psi|sigma|psi>/<psi|rho|psi>
/// with <psi|rho|psi> >= 1-eps, whose constrained minimizers are bottom
/// eigenvectors of sigma - mu rho along a multiplier sweep. Up to three
/// feasible candidates, best first; empty when no rank-one point is feasible.
std::vector<Matrix> dminf_rank_one_candidates(const DensityOperator& rho, const Matrix& sigma,
                                              double eps);

struct Bracket {
  double lower_bits = 0.0;
  double upper_bits = 0.0;
  double delta_star = 0.0;
};

struct BracketOptions {
  SeesawOptions seesaw;
  std::vector<double> delta_grid; // empty -> default grid
  SolverOptions solver;
};

/// Seesaw lower bound and delta-swept upper bound around D^eps_minF.
Bracket bracket_dminf(const DensityOperator& rho, const Matrix& sigma, double eps,
                      const BracketOptions& opts = {});

} // namespace smoothdiv
