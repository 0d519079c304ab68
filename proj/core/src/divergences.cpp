#include "smoothdiv/divergences.hpp"

#include <cmath>

namespace smoothdiv {

namespace {

void check_dims(const DensityOperator& rho, const Matrix& sigma, const char* who) {
  if (sigma.rows() != sigma.cols() || sigma.rows() != rho.dim())
    throw DimensionMismatch(std::string(who) + ": rho dim " + std::to_string(rho.dim()) +
                            " vs sigma " + std::to_string(sigma.rows()) + "x" +
                            std::to_string(sigma.cols()));
}

// Leakage of rho outside supp(sigma): ||(I-Pi) rho (I-Pi)||_F.
double support_leakage(const Matrix& rho, const Matrix& sigma) {
  Matrix pi = support_projector(sigma);
  Matrix off = Matrix::Identity(pi.rows(), pi.cols()) - pi;
  return (off * rho * off).norm();
}

} // namespace

DivergenceValue relative_entropy(const DensityOperator& rho, const Matrix& sigma) {
  check_dims(rho, sigma, "relative_entropy");
  if (support_leakage(rho.matrix(), sigma) > tol::support_leak) return DivergenceValue::infinite();
  Matrix log_rho = matrix_log2_on_support(rho.matrix());
  Matrix log_sigma = matrix_log2_on_support(sigma);
  const double d = (rho.matrix() * (log_rho - log_sigma)).trace().real();
  return {d, true};
}

DivergenceValue relative_entropy_variance(const DensityOperator& rho, const Matrix& sigma) {
  check_dims(rho, sigma, "relative_entropy_variance");
  if (support_leakage(rho.matrix(), sigma) > tol::support_leak)
    throw SupportViolation("relative_entropy_variance: supp(rho) leaks out of supp(sigma)");
  Matrix delta = matrix_log2_on_support(rho.matrix()) - matrix_log2_on_support(sigma);
  const double d = (rho.matrix() * delta).trace().real();
  const double second = (rho.matrix() * delta * delta).trace().real();
  return {std::max(second - d * d, 0.0), true};
}

DivergenceValue sandwiched_renyi(const DensityOperator& rho, const Matrix& sigma, double alpha) {
  check_dims(rho, sigma, "sandwiched_renyi");
  if (!(alpha > 0.0) || alpha == 1.0)
    throw BadAlpha("sandwiched_renyi: alpha must lie in (0,1) or (1,inf)");
  if (alpha > 1.0 && support_leakage(rho.matrix(), sigma) > tol::support_leak)
    return DivergenceValue::infinite();
  const double exponent = (1.0 - alpha) / (2.0 * alpha);
  Matrix se = matrix_power(sigma, exponent);
  Matrix inner = se * rho.matrix() * se;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (inner + inner.adjoint().eval()), Eigen::EigenvaluesOnly);
  double q = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double v = es.eigenvalues()(i);
    if (v > tol::eig_clip) q += std::pow(v, alpha);
  }
  if (q <= 0.0) return DivergenceValue::infinite();
  return {std::log2(q) / (alpha - 1.0), true};
}

DivergenceValue petz_renyi(const DensityOperator& rho, const Matrix& sigma, double alpha) {
  check_dims(rho, sigma, "petz_renyi");
  if (!(alpha > 0.0) || alpha == 1.0)
    throw BadAlpha("petz_renyi: alpha must lie in (0,1) or (1,inf)");
  if (alpha > 1.0 && support_leakage(rho.matrix(), sigma) > tol::support_leak)
    return DivergenceValue::infinite();
  Matrix ra = matrix_power(rho.matrix(), alpha);
  Matrix sb = matrix_power(sigma, 1.0 - alpha);
  const double q = (ra * sb).trace().real();
  if (q <= 0.0) return DivergenceValue::infinite();
  return {std::log2(q) / (alpha - 1.0), true};
}

DivergenceValue d_max(const DensityOperator& rho, const Matrix& sigma) {
  check_dims(rho, sigma, "d_max");
  if (support_leakage(rho.matrix(), sigma) > tol::support_leak) return DivergenceValue::infinite();
  Matrix s_inv_sqrt = matrix_power(sigma, -0.5);
  Matrix inner = s_inv_sqrt * rho.matrix() * s_inv_sqrt;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (inner + inner.adjoint().eval()), Eigen::EigenvaluesOnly);
  const double lam = es.eigenvalues().maxCoeff();
  if (lam <= 0.0) return DivergenceValue::infinite();
  return {std::log2(lam), true};
}

DivergenceValue d_min_projector(const DensityOperator& rho, const Matrix& sigma) {
  check_dims(rho, sigma, "d_min_projector");
  const double overlap = (support_projector(rho.matrix()) * sigma).trace().real();
  if (overlap <= 0.0) return DivergenceValue::infinite();
  return {-std::log2(overlap), true};
}

DivergenceValue d_min_f(const DensityOperator& rho, const Matrix& sigma) {
  check_dims(rho, sigma, "d_min_f");
  const double f = fidelity(rho.matrix(), sigma);
  if (f <= 0.0) return DivergenceValue::infinite();
  return {-std::log2(f), true};
}

MutualInformationResult mutual_information_and_variance(const DensityOperator& rho_ab,
                                                        const BipartiteLabel& label) {
  label.check(rho_ab.dim());
  Matrix rho_a = partial_trace(rho_ab.matrix(), label, Subsystem::A);
  Matrix rho_b = partial_trace(rho_ab.matrix(), label, Subsystem::B);
  Matrix prod = tensor(rho_a, rho_b);
  DivergenceValue i = relative_entropy(rho_ab, prod);
  DivergenceValue v = relative_entropy_variance(rho_ab, prod);
  return {i.bits, v.bits};
}

} // namespace smoothdiv
