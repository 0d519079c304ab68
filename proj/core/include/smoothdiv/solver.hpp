#pragma once

#include <map>
#include <string>

#include "smoothdiv/conic.hpp"

namespace smoothdiv {

enum class SolveStatus { optimal, infeasible, unbounded, inaccurate };

std::string to_string(SolveStatus s);

struct SolverOptions {
  double tol_abs = 1e-8;       // feasibility tolerance
  double tol_rel = 1e-8;       // relative duality-gap tolerance
  int max_iterations = 200000; // hard cap; the interior-point method stops far earlier
  bool verbose = false;
  // extended-precision retry after a near-converged stall; callers that
  // ladder over regularizations turn it off for the cheap early attempts
  bool allow_extended_retry = true;
};

/// Primal/dual certificate for a solved ConicProgram. Values are reported in
/// the program's own sense (a maximize program reports its supremum).
struct ConicSolution {
  SolveStatus status = SolveStatus::inaccurate;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0; // |primal - dual| / (1 + |primal|)
  double achieved_pinf = 0.0;
  double achieved_dinf = 0.0;
  RealVector x; // parameter vector
  int iterations = 0;

  Matrix witness(const ConicProgram& p, int var) const { return p.variable_value(var, x); }
  double scalar_witness(const ConicProgram& p, int var) const { return p.scalar_value(var, x); }
};

/// Narrow adapter contract: load a program, solve it, return witnesses.
class ConicSolver {
public:
  virtual ~ConicSolver() = default;
  virtual ConicSolution solve(const ConicProgram& p, const SolverOptions& opts) const = 0;
};

/// Dense primal-dual HKM predictor-corrector interior-point method over the
/// embedded real symmetric cones. Suited to the small blocks this toolkit
/// produces (dims <= 32 after embedding).
class InteriorPointSolver : public ConicSolver {
public:
  ConicSolution solve(const ConicProgram& p, const SolverOptions& opts) const override;
};

/// Solve with the process-default solver (an InteriorPointSolver).
ConicSolution solve(const ConicProgram& p, const SolverOptions& opts = {});

/// Throwing wrapper: returns only if status == optimal, otherwise raises
/// SolverFailure (infeasible/unbounded/inaccurate are all surfaced).
ConicSolution solve_or_throw(const ConicProgram& p, const SolverOptions& opts = {},
                             const std::string& what = "conic solve");

} // namespace smoothdiv
