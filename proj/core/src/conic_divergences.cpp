#include "smoothdiv/conic_divergences.hpp"

#include <cmath>

namespace smoothdiv {

namespace {

// Spectral clip of a Hermitian matrix into the operator interval [0, I].
Matrix clip_to_measurement(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint().eval()));
  RealVector ev = es.eigenvalues();
  for (int i = 0; i < ev.size(); ++i) ev(i) = std::clamp(ev(i), 0.0, 1.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace

RootFidelityResult root_fidelity_sdp(const Matrix& rho, const Matrix& sigma,
                                     const SolverOptions& opts) {
  if (rho.rows() != sigma.rows() || rho.rows() != rho.cols() || sigma.rows() != sigma.cols())
    throw DimensionMismatch("root_fidelity_sdp: dimension mismatch");
  const int d = static_cast<int>(rho.rows());

  // Primal: sup Re Tr[X] with the superblock [[rho, X],[X^dag, sigma]] PSD.
  // The general block X lives inside a pinned Hermitian 2d x 2d variable.
  ConicProgram primal;
  int g = primal.add_hermitian("G", 2 * d);
  primal.pin_principal_subblock(g, 0, rho);
  primal.pin_principal_subblock(g, d, sigma);
  primal.add_psd(primal.var_expr(g));
  primal.set_objective(Sense::maximize, primal.re_trace_offdiag_subblock(g, 0, d, d));
  ConicSolution ps = solve_or_throw(primal, opts, "root_fidelity primal");

  // Dual: (1/2) inf Tr[Y rho] + Tr[Z sigma] with [[Y, I],[I, Z]] PSD.
  ConicProgram dual;
  int y = dual.add_hermitian("Y", d);
  int z = dual.add_hermitian("Z", d);
  BlockBuilder bb({d, d});
  bb.set(0, 0, dual.var_expr(y));
  bb.set(1, 1, dual.var_expr(z));
  bb.set(0, 1, MatrixExpr::constant_matrix(Matrix::Identity(d, d)));
  dual.add_psd(bb.build());
  LinearExpr obj = dual.inner_product(y, rho);
  obj += dual.inner_product(z, sigma);
  obj *= 0.5;
  dual.set_objective(Sense::minimize, obj);
  ConicSolution ds = solve_or_throw(dual, opts, "root_fidelity dual");

  RootFidelityResult out;
  out.primal = ps.primal_value;
  out.dual = ds.primal_value;
  out.gap = std::abs(out.primal - out.dual) / (1.0 + std::abs(out.primal));
  Matrix gmat = ps.witness(primal, g);
  out.witness_x = gmat.block(0, d, d, d);
  out.witness_y = ds.witness(dual, y);
  out.witness_z = ds.witness(dual, z);
  return out;
}

HypothesisTestingResult hypothesis_testing(const DensityOperator& rho, const Matrix& sigma,
                                           double eps, const SolverOptions& opts) {
  if (sigma.rows() != rho.dim() || sigma.cols() != rho.dim())
    throw DimensionMismatch("hypothesis_testing: dimension mismatch");
  if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("hypothesis_testing: eps must lie in [0,1)");
  const int d = rho.dim();

  ConicProgram p;
  int lam = p.add_hermitian("Lambda", d);
  p.add_psd(p.var_expr(lam));
  p.add_psd(MatrixExpr::constant_matrix(Matrix::Identity(d, d)) - p.var_expr(lam));
  LinearExpr type1 = p.inner_product(lam, rho.matrix());
  type1.constant = -(1.0 - eps);
  p.add_ge(type1);
  p.set_objective(Sense::minimize, p.inner_product(lam, sigma));
  ConicSolution s = solve_or_throw(p, opts, "hypothesis_testing");

  HypothesisTestingResult out;
  out.beta = s.primal_value;
  out.beta_dual = s.dual_value;
  out.gap = s.gap;
  out.bits = out.beta > 0.0 ? -std::log2(out.beta) : std::numeric_limits<double>::infinity();
  out.witness_lambda = clip_to_measurement(s.witness(p, lam));
  return out;
}

HypothesisTestingResult smooth_min_mutual_info(const DensityOperator& rho_ab,
                                               const BipartiteLabel& label, double eps,
                                               const SolverOptions& opts) {
  label.check(rho_ab.dim());
  Matrix rho_a = partial_trace(rho_ab.matrix(), label, Subsystem::A);
  Matrix rho_b = partial_trace(rho_ab.matrix(), label, Subsystem::B);
  return hypothesis_testing(rho_ab, tensor(rho_a, rho_b), eps, opts);
}

} // namespace smoothdiv
