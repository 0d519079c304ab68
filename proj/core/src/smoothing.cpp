#include "smoothdiv/smoothing.hpp"

#include <cmath>

#include "smoothdiv/asymptotics.hpp"

namespace smoothdiv {

namespace {

// Solver slack admitted when re-validating witnesses spectrally.
constexpr double kFidelitySlack = 1e-6;
constexpr double kTraceSlack = 1e-8;

Matrix clip_psd(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint().eval()));
  RealVector ev = es.eigenvalues();
  for (int i = 0; i < ev.size(); ++i) ev(i) = std::max(ev(i), 0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

DensityOperator validate_witness(const Matrix& rho_tilde, const DensityOperator& rho, double eps) {
  Matrix clipped = clip_psd(rho_tilde);
  const double tr = clipped.trace().real();
  if (tr > 1.0 + kTraceSlack)
    throw SolverFailure("smoothing witness trace " + std::to_string(tr) + " exceeds 1");
  const double f = fidelity(clipped, rho.matrix());
  if (f < 1.0 - eps - kFidelitySlack)
    throw SolverFailure("smoothing witness fidelity " + std::to_string(f) + " below 1-eps");
  return make_density(clipped, StateKind::subnormalized);
}

// Primal of Props. 15/16: min lambda over the pinned superblock
// [[rho, X],[X^dag, rho_tilde]] >= 0, Re Tr X >= sqrt(1-eps),
// rho_tilde <= lambda sigma, Tr rho_tilde <= 1 (or = 1).
struct DmaxPrimal {
  ConicProgram prog;
  int g = -1;
  int lambda = -1;
  int d = 0;
};

DmaxPrimal build_dmax_primal(const Matrix& rho, const Matrix& sigma, double eps, SmoothingSet set) {
  DmaxPrimal p;
  const int d = static_cast<int>(rho.rows());
  p.d = d;
  p.g = p.prog.add_hermitian("G", 2 * d);
  p.lambda = p.prog.add_scalar("lambda");
  p.prog.pin_principal_subblock(p.g, 0, rho);
  p.prog.add_psd(p.prog.var_expr(p.g));
  p.prog.add_psd(p.prog.scalar_times(p.lambda, sigma) - p.prog.principal_subblock(p.g, d, d));
  LinearExpr fid = p.prog.re_trace_offdiag_subblock(p.g, 0, d, d);
  fid.constant = -std::sqrt(1.0 - eps);
  p.prog.add_ge(fid);
  LinearExpr tr = p.prog.trace_principal_subblock(p.g, d, d);
  tr.constant = -1.0;
  if (set == SmoothingSet::subnormalized) {
    tr *= -1.0; // 1 - Tr >= 0
    p.prog.add_ge(tr);
  } else {
    p.prog.add_eq(tr);
  }
  p.prog.add_ge(p.prog.scalar_expr(p.lambda));
  p.prog.set_objective(Sense::minimize, p.prog.scalar_expr(p.lambda));
  return p;
}

// Duals of Props. 15/16: sup (+/-)mu + 2 nu sqrt(1-eps) - Tr[Z rho] with
// Tr[W sigma] <= 1 and [[Z, nu I],[nu I, W -/+ mu I]] >= 0.
ConicProgram build_dmax_dual(const Matrix& rho, const Matrix& sigma, double eps, SmoothingSet set) {
  ConicProgram q;
  const int d = static_cast<int>(rho.rows());
  int w = q.add_hermitian("W", d);
  int z = q.add_hermitian("Z", d);
  int nu = q.add_scalar("nu");
  int mu = q.add_scalar("mu");
  q.add_psd(q.var_expr(w));
  q.add_psd(q.var_expr(z));
  q.add_ge(q.scalar_expr(nu));
  if (set == SmoothingSet::subnormalized) q.add_ge(q.scalar_expr(mu));

  BlockBuilder bb({d, d});
  bb.set(0, 0, q.var_expr(z));
  bb.set(0, 1, q.scalar_times(nu, Matrix::Identity(d, d)));
  MatrixExpr corner = q.var_expr(w);
  const double mu_sign = set == SmoothingSet::subnormalized ? 1.0 : -1.0;
  corner += q.scalar_times(mu, mu_sign * Matrix::Identity(d, d));
  bb.set(1, 1, corner);
  q.add_psd(bb.build());

  LinearExpr tr_w = q.inner_product(w, sigma);
  tr_w *= -1.0;
  tr_w.constant = 1.0; // 1 - Tr[W sigma] >= 0
  q.add_ge(tr_w);

  LinearExpr obj = q.scalar_expr(mu);
  obj *= set == SmoothingSet::subnormalized ? -1.0 : 1.0;
  LinearExpr nu_term = q.scalar_expr(nu);
  nu_term *= 2.0 * std::sqrt(1.0 - eps);
  obj += nu_term;
  LinearExpr z_term = q.inner_product(z, rho);
  z_term *= -1.0;
  obj += z_term;
  q.set_objective(Sense::maximize, obj);
  return q;
}

double combined_gap(double primal, double dual, const ConicSolution& ps, const ConicSolution& ds) {
  const double stated = std::abs(primal - dual) / (1.0 + std::abs(primal));
  return std::max({stated, ps.gap, ds.gap});
}

} // namespace

SmoothingResult smooth_dmax(const DensityOperator& rho, const Matrix& sigma, double eps,
                            SmoothingSet set, const SolverOptions& opts) {
  if (sigma.rows() != rho.dim() || sigma.cols() != rho.dim())
    throw DimensionMismatch("smooth_dmax: dimension mismatch");
  if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("smooth_dmax: eps must lie in [0,1)");
  const int d = rho.dim();

  if (eps == 0.0) {
    // F(rho_tilde, rho) >= 1 with Tr rho_tilde <= 1 forces rho_tilde = rho
    // exactly, so the program reduces to the plain d_max SDP. The stated dual
    // is not solved here: with the fidelity constraint active at its extreme
    // point its supremum is not attained and an interior-point method cannot
    // certify it; the reduced pair proves the same value.
    ConicProgram p;
    int lambda = p.add_scalar("lambda");
    p.add_psd(p.scalar_times(lambda, sigma) - MatrixExpr::constant_matrix(rho.matrix()));
    p.add_ge(p.scalar_expr(lambda));
    p.set_objective(Sense::minimize, p.scalar_expr(lambda));
    ConicSolution ps = solve_or_throw(p, opts, "smooth_dmax primal (eps=0)");
    SmoothingResult out(std::log2(ps.primal_value), validate_witness(rho.matrix(), rho, 0.0));
    out.dual_bits = std::log2(ps.dual_value);
    out.aux_witnesses["lambda"] = Matrix::Constant(1, 1, ps.primal_value);
    out.status = SolveStatus::optimal;
    out.gap = ps.gap;
    return out;
  }

  DmaxPrimal p = build_dmax_primal(rho.matrix(), sigma, eps, set);
  ConicSolution ps = solve_or_throw(p.prog, opts, "smooth_dmax primal");
  const double lambda_primal = ps.scalar_witness(p.prog, p.lambda);
  Matrix rho_tilde = ps.witness(p.prog, p.g).block(d, d, d, d);

  ConicProgram q = build_dmax_dual(rho.matrix(), sigma, eps, set);
  ConicSolution ds = solve_or_throw(q, opts, "smooth_dmax dual");
  const double lambda_dual = ds.primal_value;

  SmoothingResult out(std::log2(lambda_primal), validate_witness(rho_tilde, rho, eps));
  out.dual_bits = std::log2(lambda_dual);
  out.aux_witnesses["lambda"] = Matrix::Constant(1, 1, lambda_primal);
  out.aux_witnesses["W"] = ds.witness(q, 0);
  out.aux_witnesses["Z"] = ds.witness(q, 1);
  out.status = SolveStatus::optimal;
  out.gap = combined_gap(lambda_primal, lambda_dual, ps, ds);
  // the primal witness certifies the value as a bound even when a thin
  // instance leaves a few 1e-5 of relative slack between the two programs
  if (out.gap > 1e-4)
    throw SolverFailure("smooth_dmax: primal/dual disagree, gap " + std::to_string(out.gap));
  return out;
}

SmoothingResult smooth_hmin(const DensityOperator& rho_ab, const BipartiteLabel& label, double eps,
                            const SolverOptions& opts) {
  label.check(rho_ab.dim());
  if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("smooth_hmin: eps must lie in [0,1)");
  const int dab = rho_ab.dim();
  const int da = label.dimA, db = label.dimB;
  const double comp = std::sqrt(1.0 - eps * eps); // eps^2 smoothing radius inside the program

  auto embed_sb = [&](const Matrix& s) { return tensor(Matrix::Identity(da, da), s); };

  double tr_s_primal = 0.0;
  Matrix rho_tilde, s_b;
  ConicSolution ps;
  if (eps == 0.0) {
    // same exact reduction as smooth_dmax at eps = 0; the reduced pair also
    // supplies the dual certificate since the stated dual is unattained here
    ConicProgram p;
    int sb = p.add_hermitian("S_B", db);
    MatrixExpr lifted = p.var_expr(sb).mapped(dab, [&](const Matrix& m) { return embed_sb(m); });
    p.add_psd(lifted - MatrixExpr::constant_matrix(rho_ab.matrix()));
    p.set_objective(Sense::minimize, p.trace_expr(sb));
    ps = solve_or_throw(p, opts, "smooth_hmin primal (eps=0)");
    SmoothingResult out(-std::log2(ps.primal_value), validate_witness(rho_ab.matrix(), rho_ab, 0.0));
    out.dual_bits = -std::log2(ps.dual_value);
    out.aux_witnesses["S_B"] = ps.witness(p, sb);
    out.status = SolveStatus::optimal;
    out.gap = ps.gap;
    return out;
  } else {
    ConicProgram p;
    int g = p.add_hermitian("G", 2 * dab);
    int sb = p.add_hermitian("S_B", db);
    p.pin_principal_subblock(g, 0, rho_ab.matrix());
    p.add_psd(p.var_expr(g));
    p.add_psd(p.var_expr(sb));
    MatrixExpr lifted = p.var_expr(sb).mapped(dab, [&](const Matrix& m) { return embed_sb(m); });
    p.add_psd(lifted - p.principal_subblock(g, dab, dab));
    LinearExpr fid = p.re_trace_offdiag_subblock(g, 0, dab, dab);
    fid.constant = -comp;
    p.add_ge(fid);
    LinearExpr tr = p.trace_principal_subblock(g, dab, dab);
    tr *= -1.0;
    tr.constant = 1.0;
    p.add_ge(tr);
    p.set_objective(Sense::minimize, p.trace_expr(sb));
    ps = solve_or_throw(p, opts, "smooth_hmin primal");
    tr_s_primal = ps.primal_value;
    rho_tilde = ps.witness(p, g).block(dab, dab, dab, dab);
    s_b = ps.witness(p, sb);
  }

  // Dual: sup -mu + 2 nu sqrt(1-eps^2) - Tr[Z rho] with Tr_A[W] <= I_B and
  // [[Z, nu I],[nu I, W + mu I]] >= 0.
  ConicProgram q;
  int w = q.add_hermitian("W", dab);
  int z = q.add_hermitian("Z", dab);
  int nu = q.add_scalar("nu");
  int mu = q.add_scalar("mu");
  q.add_psd(q.var_expr(w));
  q.add_psd(q.var_expr(z));
  q.add_ge(q.scalar_expr(nu));
  q.add_ge(q.scalar_expr(mu));
  BlockBuilder bb({dab, dab});
  bb.set(0, 0, q.var_expr(z));
  bb.set(0, 1, q.scalar_times(nu, Matrix::Identity(dab, dab)));
  bb.set(1, 1, q.var_expr(w) + q.scalar_times(mu, Matrix::Identity(dab, dab)));
  q.add_psd(bb.build());
  BipartiteLabel lab(da, db);
  MatrixExpr tra = q.var_expr(w).mapped(db, [&](const Matrix& m) {
    return partial_trace(m, lab, Subsystem::B);
  });
  q.add_psd(MatrixExpr::constant_matrix(Matrix::Identity(db, db)) - tra);
  LinearExpr obj = q.scalar_expr(mu);
  obj *= -1.0;
  LinearExpr nu_term = q.scalar_expr(nu);
  nu_term *= 2.0 * comp;
  obj += nu_term;
  LinearExpr z_term = q.inner_product(z, rho_ab.matrix());
  z_term *= -1.0;
  obj += z_term;
  q.set_objective(Sense::maximize, obj);
  ConicSolution ds = solve_or_throw(q, opts, "smooth_hmin dual");

  SmoothingResult out(-std::log2(tr_s_primal), validate_witness(rho_tilde, rho_ab, eps * eps));
  out.dual_bits = -std::log2(ds.primal_value);
  out.aux_witnesses["S_B"] = s_b;
  out.aux_witnesses["W"] = ds.witness(q, w);
  out.aux_witnesses["Z"] = ds.witness(q, z);
  out.status = SolveStatus::optimal;
  out.gap = combined_gap(tr_s_primal, ds.primal_value, ps, ds);
  if (out.gap > 1e-4)
    throw SolverFailure("smooth_hmin: primal/dual disagree, gap " + std::to_string(out.gap));
  return out;
}

namespace {

// Block (i): fix rho_tilde, minimize (1/2)(Tr[Y rho_tilde] + Tr[Z sigma])
// over [[Y, I],[I, Z]] >= 0. The optimum equals sqrtF(rho_tilde, sigma).
struct BlockOne {
  double a = 0.0;
  Matrix y, z;
};

BlockOne solve_block_one(const Matrix& rho_tilde, const Matrix& sigma, const SolverOptions& opts) {
  const int d = static_cast<int>(sigma.rows());
  ConicProgram p;
  int y = p.add_hermitian("Y", d);
  int z = p.add_hermitian("Z", d);
  BlockBuilder bb({d, d});
  bb.set(0, 0, p.var_expr(y));
  bb.set(1, 1, p.var_expr(z));
  bb.set(0, 1, MatrixExpr::constant_matrix(Matrix::Identity(d, d)));
  p.add_psd(bb.build());
  LinearExpr obj = p.inner_product(y, rho_tilde);
  obj += p.inner_product(z, sigma);
  obj *= 0.5;
  p.set_objective(Sense::minimize, obj);
  ConicSolution s = solve_or_throw(p, opts, "seesaw block (i)");
  return {s.primal_value, s.witness(p, y), s.witness(p, z)};
}

// Block (ii): fix Y, minimize (1/2)(Tr[Y rho_tilde] + Tr[Z sigma]) over the
// pinned superblock [[rho_tilde, X],[X^dag, rho]] >= 0, Re Tr X >= sqrt(1-eps),
// Tr rho_tilde <= 1, and [[Y, I],[I, Z]] >= 0 in Z. The candidate it emits is
// revalidated spectrally by the caller, so a loosely converged solve is still
// useful; only a solve with no usable iterate throws.
Matrix solve_block_two(const Matrix& y_fixed, const DensityOperator& rho, const Matrix& sigma,
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
    throw SolverFailure("seesaw block (ii): solver returned " + to_string(s.status));
  return s.witness(p, g).block(0, 0, d, d);
}

// Rescale a feasible candidate onto the equality face F(rho_tilde, rho) = 1-eps.
// Scaling by c in (0,1] never increases the objective (F is linear in one
// argument under scaling).
Matrix rescale_to_equality(const Matrix& rho_tilde, const DensityOperator& rho, double eps) {
  const double f = fidelity(clip_psd(rho_tilde), rho.matrix());
  if (f > 1.0 - eps && f > 0.0) {
    const double c = (1.0 - eps) / f;
    if (c <= 1.0) return c * rho_tilde;
  }
  return rho_tilde;
}

} // namespace

std::vector<Matrix> dminf_rank_one_candidates(const DensityOperator& rho, const Matrix& sigma,
                                              double eps) {
  const int d = rho.dim();
  std::vector<std::pair<double, Matrix>> scored;
  for (int k = 0; k <= 24; ++k) {
    const double mu = std::pow(10.0, -3.0 + 6.0 * k / 24.0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(sigma - mu * rho.matrix());
    for (int col = 0; col < d; ++col) {
      Eigen::VectorXcd psi = es.eigenvectors().col(col);
      const double pr = (psi.adjoint() * rho.matrix() * psi)(0, 0).real();
      const double ps = (psi.adjoint() * sigma * psi)(0, 0).real();
      if (pr < 1.0 - eps || pr <= 0.0) continue;
      const double value = ps > 0.0 ? -std::log2((1.0 - eps) * ps / pr)
                                    : std::numeric_limits<double>::infinity();
      Matrix cand = ((1.0 - eps) / pr) * (psi * psi.adjoint());
      scored.emplace_back(value, std::move(cand));
    }
  }
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < scored.size() && out.size() < 3; ++i) out.push_back(scored[i].second);
  return out;
}

SeesawOutcome seesaw_dminf_lower(const DensityOperator& rho, const Matrix& sigma, double eps,
                                 const SeesawOptions& opts) {
  if (sigma.rows() != rho.dim() || sigma.cols() != rho.dim())
    throw DimensionMismatch("seesaw_dminf_lower: dimension mismatch");
  if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("seesaw_dminf_lower: eps must lie in [0,1)");
  if (opts.restarts < 1) throw DomainError("seesaw_dminf_lower: restarts must be >= 1");
  const int d = rho.dim();

  Rng rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const int restarts = eps == 0.0 ? 1 : opts.restarts;
  std::vector<SeesawTrace> traces;
  double best_a = std::numeric_limits<double>::infinity();
  Matrix best_rho_tilde, best_y, best_z;
  int failures = 0;

  // restart 0 starts from rho itself; the next few slots take warm starts and
  // the deterministic rank-one seeds; the rest mix rho with random pure
  // states and rescale onto the equality face F(rho_tilde, rho) = 1 - eps
  std::vector<Matrix> seeds;
  seeds.push_back(rho.matrix());
  if (eps > 0.0) {
    for (const auto& warm : opts.warm_starts) {
      Matrix clipped = clip_psd(warm);
      if (clipped.rows() == d && fidelity(clipped, rho.matrix()) >= 1.0 - eps &&
          clipped.trace().real() <= 1.0 + kTraceSlack)
        seeds.push_back(rescale_to_equality(clipped, rho, eps));
    }
    seeds.push_back((1.0 - eps) * rho.matrix());
    for (auto& cand : dminf_rank_one_candidates(rho, sigma, eps)) seeds.push_back(std::move(cand));
  }

  for (int r = 0; r < restarts + static_cast<int>(seeds.size()) - 1; ++r) {
    Matrix rho_tilde;
    if (r < static_cast<int>(seeds.size())) {
      rho_tilde = seeds[r];
    } else {
      const double t = unit(rng) * eps;
      Matrix mix = (1.0 - t) * rho.matrix() + t * random_pure_state(rng, d);
      const double f = fidelity(mix, rho.matrix());
      if (f < 1.0 - eps) {
        ++failures;
        continue;
      }
      rho_tilde = ((1.0 - eps) / f) * mix;
    }

    SeesawTrace trace;
    trace.restart_id = r;
    double prev_a = std::numeric_limits<double>::infinity();
    double restart_best = std::numeric_limits<double>::infinity();
    bool any = false;
    try {
      for (int k = 0; k < std::max(1, opts.max_iters); ++k) {
        // Block (i) with a conditional interior shift: at rank-deficient
        // iterates the dual-form fidelity SDP has an unattained infimum, but
        // rho_tilde + delta I stays feasible (fidelity is operator monotone
        // and the trace slack absorbs delta), so the shifted solve certifies
        // a valid, marginally weaker iterate. Ladder attempts run on a
        // bounded budget; only the last one earns the extended-precision
        // retry.
        BlockOne b1;
        bool have_witnesses = true;
        double a_k = 0.0;
        bool solved = false;
        Eigen::SelfAdjointEigenSolver<Matrix> ert(rho_tilde, Eigen::EigenvaluesOnly);
        const double lmin = ert.eigenvalues().minCoeff();
        const double tr_rt = rho_tilde.trace().real();
        const std::vector<double> ladder =
            lmin < 1e-10 * tr_rt ? std::vector<double>{1e-9, 1e-7} : std::vector<double>{0.0, 1e-9, 1e-7};
        for (std::size_t li = 0; li < ladder.size(); ++li) {
          const double delta = ladder[li];
          Matrix candidate = rho_tilde;
          if (delta > 0.0) candidate += (delta * tr_rt / d) * Matrix::Identity(d, d);
          SolverOptions block_opts = opts.solver;
          block_opts.max_iterations = std::min(opts.solver.max_iterations, 80);
          block_opts.allow_extended_retry = li + 1 == ladder.size();
          try {
            b1 = solve_block_one(candidate, sigma, block_opts);
          } catch (const SolverFailure&) {
            continue;
          }
          const double a_spectral = root_fidelity(clip_psd(candidate), sigma);
          if (std::abs(b1.a - a_spectral) > 1e-6 * (1.0 + a_spectral)) continue;
          rho_tilde = candidate;
          a_k = b1.a;
          solved = true;
          break;
        }
        if (!solved) {
          // certify the candidate spectrally; the climb cannot continue
          a_k = root_fidelity(clip_psd(rho_tilde), sigma);
          have_witnesses = false;
        }
        trace.iterates.push_back(a_k);
        any = true;
        if (a_k < restart_best) restart_best = a_k;
        if (a_k < best_a) {
          best_a = a_k;
          best_rho_tilde = rho_tilde;
          best_y = have_witnesses ? b1.y : Matrix();
          best_z = have_witnesses ? b1.z : Matrix();
        }
        if (!have_witnesses) break;
        if (std::abs(prev_a - a_k) <= opts.tol) {
          trace.converged = true;
          break;
        }
        prev_a = a_k;
        if (eps == 0.0) {
          trace.converged = true;
          break;
        }
        Matrix next = solve_block_two(b1.y, rho, sigma, eps, opts.solver);
        Matrix clipped = clip_psd(next);
        if (fidelity(clipped, rho.matrix()) < 1.0 - eps - kFidelitySlack ||
            clipped.trace().real() > 1.0 + kTraceSlack)
          throw SolverFailure("seesaw block (ii) produced an infeasible candidate");
        rho_tilde = rescale_to_equality(clipped, rho, eps);
      }
    } catch (const SolverFailure&) {
      if (!any) {
        ++failures;
        continue; // restart abandoned, others continue
      }
    }
    trace.best_value_bits = -2.0 * std::log2(restart_best);
    traces.push_back(std::move(trace));
  }

  if (!std::isfinite(best_a))
    throw AllRestartsFailed("seesaw_dminf_lower: every restart failed");

  SmoothingResult result(-2.0 * std::log2(best_a), validate_witness(best_rho_tilde, rho, eps));
  result.aux_witnesses["Y"] = best_y;
  result.aux_witnesses["Z"] = best_z;
  result.status = SolveStatus::optimal;
  result.gap = std::abs(best_a - root_fidelity(clip_psd(best_rho_tilde), sigma)) / (1.0 + best_a);
  return {std::move(result), std::move(traces)};
}

std::vector<double> default_delta_grid(double eps, int points) {
  const double span = 1.0 - eps;
  const double lo = 1e-4 * span, hi = 0.999 * span;
  std::vector<double> grid;
  grid.reserve(points);
  for (int i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    grid.push_back(lo * std::pow(hi / lo, t));
  }
  return grid;
}

UpperBoundResult dminf_upper(const DensityOperator& rho, const Matrix& sigma, double eps,
                             const std::vector<double>& delta_grid, const SolverOptions& opts) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("dminf_upper: eps must lie in (0,1)");
  if (delta_grid.empty()) throw EmptyGrid("dminf_upper: empty delta grid");

  // the sweep runs the stated primal only (its feasible witness already
  // certifies each point as an upper bound); the winning delta is re-solved
  // through the full primal/dual pair below
  UpperBoundResult best;
  best.upper_bits = std::numeric_limits<double>::infinity();
  for (double delta : delta_grid) {
    if (!(delta > 0.0 && delta < 1.0 - eps)) continue;
    const double f = f_eps_delta(eps, delta);
    if (f >= 1.0 - 1e-12) continue; // delta -> 0 end contributes +inf, excluded
    const double eps1 = 1.0 - eps - delta;
    DmaxPrimal p = build_dmax_primal(rho.matrix(), sigma, eps1, SmoothingSet::subnormalized);
    ConicSolution ps = solve_or_throw(p.prog, opts, "dminf_upper sweep point");
    const double lambda = ps.scalar_witness(p.prog, p.lambda);
    validate_witness(ps.witness(p.prog, p.g).block(p.d, p.d, p.d, p.d), rho, eps1);
    const double value = std::log2(lambda) + std::log2(1.0 / (1.0 - f));
    if (value < best.upper_bits) {
      best.upper_bits = value;
      best.delta_star = delta;
    }
  }
  if (!std::isfinite(best.upper_bits))
    throw EmptyGrid("dminf_upper: no usable delta in the grid");
  SmoothingResult confirm =
      smooth_dmax(rho, sigma, 1.0 - eps - best.delta_star, SmoothingSet::subnormalized, opts);
  best.upper_bits = confirm.value_bits + std::log2(1.0 / (1.0 - f_eps_delta(eps, best.delta_star)));
  return best;
}

Bracket bracket_dminf(const DensityOperator& rho, const Matrix& sigma, double eps,
                      const BracketOptions& opts) {
  SeesawOptions so = opts.seesaw;
  so.solver = opts.solver;
  SeesawOutcome lower = seesaw_dminf_lower(rho, sigma, eps, so);
  std::vector<double> grid = opts.delta_grid.empty() ? default_delta_grid(eps) : opts.delta_grid;
  UpperBoundResult upper = dminf_upper(rho, sigma, eps, grid, opts.solver);
  if (lower.result.value_bits > upper.upper_bits + 1e-6)
    throw Error("bracket_dminf: lower bound exceeds upper bound (lower=" +
                std::to_string(lower.result.value_bits) + ", upper=" +
                std::to_string(upper.upper_bits) + ")");
  return {lower.result.value_bits, upper.upper_bits, upper.delta_star};
}

} // namespace smoothdiv
