#include "smoothdiv/operators.hpp"

#include <algorithm>
#include <cmath>

namespace smoothdiv {

namespace {

Eigen::SelfAdjointEigenSolver<Matrix> eigensolve(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
  return es;
}

void check_square(const Matrix& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw DimensionMismatch(std::string(who) + ": matrix must be square, got " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

void check_psd_input(const Matrix& m, const char* who) {
  check_square(m, who);
  HermitianOperator h(m);
  if (h.min_eigenvalue() < tol::psd_reject)
    throw NotPSD(std::string(who) + ": min eigenvalue " + std::to_string(h.min_eigenvalue()));
}

} // namespace

HermitianOperator::HermitianOperator(const Matrix& m) {
  check_square(m, "HermitianOperator");
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol::hermiticity_reject)
    throw NotHermitian("asymmetry " + std::to_string(asym) + " exceeds 1e-8");
  mat_ = 0.5 * (m + m.adjoint().eval());
}

RealVector HermitianOperator::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(mat_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double HermitianOperator::min_eigenvalue() const { return eigenvalues().minCoeff(); }
double HermitianOperator::max_eigenvalue() const { return eigenvalues().maxCoeff(); }

HermitianOperator HermitianOperator::identity(int dim) {
  return HermitianOperator(Matrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::zero(int dim) {
  return HermitianOperator(Matrix::Zero(dim, dim));
}

DensityOperator make_density(const Matrix& m, StateKind kind) {
  HermitianOperator h(m);
  auto es = eigensolve(h.matrix());
  RealVector evals = es.eigenvalues();
  if (evals.minCoeff() < tol::psd_reject)
    throw NotPSD("make_density: min eigenvalue " + std::to_string(evals.minCoeff()));
  // Clip spectral noise so the stored operator is exactly PSD.
  for (int i = 0; i < evals.size(); ++i) evals(i) = std::max(evals(i), 0.0);
  Matrix clipped = es.eigenvectors() * evals.asDiagonal() * es.eigenvectors().adjoint();
  double tr = clipped.trace().real();
  if (kind == StateKind::normalized) {
    if (std::abs(tr - 1.0) > tol::trace_check)
      throw TraceViolation("make_density: trace " + std::to_string(tr) + " != 1");
    clipped /= tr;
  } else {
    if (tr > 1.0 + tol::trace_check)
      throw TraceViolation("make_density: trace " + std::to_string(tr) + " > 1");
    if (tr > 1.0) clipped /= tr;
  }
  return DensityOperator(HermitianOperator(clipped), kind);
}

QuantumChannel::QuantumChannel(std::vector<Matrix> kraus) : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw ModelError("QuantumChannel: empty Kraus list");
  out_dim_ = static_cast<int>(kraus_[0].rows());
  in_dim_ = static_cast<int>(kraus_[0].cols());
  Matrix sum = Matrix::Zero(in_dim_, in_dim_);
  for (const auto& k : kraus_) {
    if (k.rows() != out_dim_ || k.cols() != in_dim_)
      throw DimensionMismatch("QuantumChannel: inconsistent Kraus shapes");
    sum += k.adjoint() * k;
  }
  const double dev = (sum - Matrix::Identity(in_dim_, in_dim_)).cwiseAbs().maxCoeff();
  if (dev > tol::trace_check)
    throw TraceViolation("QuantumChannel: sum K^dag K deviates from I by " + std::to_string(dev));
  if (dev > 1e-14) {
    // Polar correction K_k <- K_k (sum)^(-1/2) restores exact trace preservation.
    Matrix s_inv_sqrt = matrix_power(sum, -0.5);
    for (auto& k : kraus_) k = k * s_inv_sqrt;
  }
}

double root_fidelity(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("fidelity: dimension mismatch");
  check_psd_input(a, "fidelity(A)");
  check_psd_input(b, "fidelity(B)");
  // ||sqrt(A) sqrt(B)||_1 via the eigenvalues of sqrt(A) B sqrt(A), which is
  // PSD, so the spectrum is real nonnegative by construction.
  Matrix ra = matrix_sqrt(a);
  Matrix inner = ra * b * ra;
  auto es = eigensolve(0.5 * (inner + inner.adjoint().eval()));
  double sum = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam > tol::eig_clip) sum += std::sqrt(lam);
  }
  return sum;
}

double fidelity(const Matrix& a, const Matrix& b) {
  const double rf = root_fidelity(a, b);
  return rf * rf;
}

double fidelity(const DensityOperator& a, const DensityOperator& b) {
  return fidelity(a.matrix(), b.matrix());
}

Matrix apply_channel(const QuantumChannel& n, const Matrix& a) {
  check_square(a, "apply_channel");
  if (a.rows() != n.input_dim())
    throw DimensionMismatch("apply_channel: operator dim " + std::to_string(a.rows()) +
                            " vs channel input " + std::to_string(n.input_dim()));
  Matrix out = Matrix::Zero(n.output_dim(), n.output_dim());
  for (const auto& k : n.kraus()) out += k * a * k.adjoint();
  return out;
}

DensityOperator apply_channel(const QuantumChannel& n, const DensityOperator& rho) {
  return make_density(apply_channel(n, rho.matrix()), rho.kind());
}

Matrix partial_trace(const Matrix& m, const BipartiteLabel& label, Subsystem keep) {
  check_square(m, "partial_trace");
  label.check(static_cast<int>(m.rows()));
  const int da = label.dimA, db = label.dimB;
  if (keep == Subsystem::A) {
    Matrix out = Matrix::Zero(da, da);
    for (int a1 = 0; a1 < da; ++a1)
      for (int a2 = 0; a2 < da; ++a2)
        for (int b = 0; b < db; ++b) out(a1, a2) += m(a1 * db + b, a2 * db + b);
    return out;
  }
  Matrix out = Matrix::Zero(db, db);
  for (int b1 = 0; b1 < db; ++b1)
    for (int b2 = 0; b2 < db; ++b2)
      for (int a = 0; a < da; ++a) out(b1, b2) += m(a * db + b1, a * db + b2);
  return out;
}

Matrix tensor(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix matrix_function(const Matrix& a, MatrixFunction fn, double exponent) {
  check_square(a, "matrix_function");
  auto es = eigensolve(HermitianOperator(a).matrix());
  RealVector evals = es.eigenvalues();
  if (evals.minCoeff() < tol::psd_reject)
    throw NegativeEigenvalue("matrix_function: eigenvalue " + std::to_string(evals.minCoeff()));
  RealVector mapped(evals.size());
  for (int i = 0; i < evals.size(); ++i) {
    double v = evals(i) < tol::eig_clip ? 0.0 : evals(i);
    switch (fn) {
      case MatrixFunction::sqrt:
        mapped(i) = std::sqrt(v);
        break;
      case MatrixFunction::log2_on_support:
        mapped(i) = v == 0.0 ? 0.0 : std::log2(v);
        break;
      case MatrixFunction::power:
        mapped(i) = v == 0.0 ? 0.0 : std::pow(v, exponent);
        break;
    }
  }
  return es.eigenvectors() * mapped.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix matrix_sqrt(const Matrix& a) { return matrix_function(a, MatrixFunction::sqrt); }
Matrix matrix_log2_on_support(const Matrix& a) { return matrix_function(a, MatrixFunction::log2_on_support); }
Matrix matrix_power(const Matrix& a, double exponent) { return matrix_function(a, MatrixFunction::power, exponent); }

Matrix support_projector(const Matrix& a) {
  auto es = eigensolve(HermitianOperator(a).matrix());
  Matrix p = Matrix::Zero(a.rows(), a.cols());
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > tol::eig_clip)
      p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  return p;
}

namespace {

Matrix ginibre(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  return g;
}

} // namespace

DensityOperator random_state(Rng& rng, int dim) {
  if (dim < 1) throw DomainError("random_state: dim must be >= 1");
  Matrix g = ginibre(rng, dim, dim);
  Matrix w = g * g.adjoint();
  return make_density(w / w.trace().real(), StateKind::normalized);
}

Matrix random_psd(Rng& rng, int dim) {
  if (dim < 1) throw DomainError("random_psd: dim must be >= 1");
  Matrix g = ginibre(rng, dim, dim);
  Matrix w = g * g.adjoint();
  // trace fluctuates around one so downstream scaling branches stay exercised
  return w / (2.0 * dim * dim);
}

Matrix random_pure_state(Rng& rng, int dim) {
  Matrix g = ginibre(rng, dim, 1);
  g /= g.norm();
  return g * g.adjoint();
}

QuantumChannel random_channel(Rng& rng, int dim, int kraus_rank) {
  if (dim < 1 || kraus_rank < 1) throw DomainError("random_channel: bad dimensions");
  // Isometry completion: QR of a (dim*kraus_rank) x dim Ginibre matrix gives
  // V with V^dag V = I; carve the Kraus operators out of its row blocks.
  Matrix g = ginibre(rng, dim * kraus_rank, dim);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(dim * kraus_rank, dim);
  std::vector<Matrix> kraus;
  kraus.reserve(kraus_rank);
  for (int k = 0; k < kraus_rank; ++k) kraus.push_back(q.block(k * dim, 0, dim, dim));
  return QuantumChannel(std::move(kraus));
}

DensityOperator random_state(std::uint64_t seed, int dim) {
  Rng rng(seed);
  return random_state(rng, dim);
}

Matrix random_psd(std::uint64_t seed, int dim) {
  Rng rng(seed);
  return random_psd(rng, dim);
}

QuantumChannel random_channel(std::uint64_t seed, int dim, int kraus_rank) {
  Rng rng(seed);
  return random_channel(rng, dim, kraus_rank);
}

} // namespace smoothdiv
