#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "smoothdiv/errors.hpp"

namespace smoothdiv {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Numerical policy shared across the operator layer.
namespace tol {
inline constexpr double hermiticity_reject = 1e-8;  // asymmetry above this is an error
inline constexpr double psd_reject = -1e-8;         // eigenvalues below this are an error
inline constexpr double eig_clip = 1e-12;           // eigenvalues below this are treated as exact zeros
inline constexpr double trace_check = 1e-8;
inline constexpr double support_leak = 1e-9;        // projector-leakage threshold for the +inf branch
} // namespace tol

/// Dense complex self-adjoint matrix. Construction symmetrizes the input,
/// (A + A^dag)/2, and rejects anything whose asymmetry exceeds 1e-8.
class HermitianOperator {
public:
  explicit HermitianOperator(const Matrix& m);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Matrix& matrix() const { return mat_; }
  double trace() const { return mat_.trace().real(); }

  /// Eigenvalues in increasing order (they are real by construction).
  RealVector eigenvalues() const;
  double min_eigenvalue() const;
  double max_eigenvalue() const;

  static HermitianOperator identity(int dim);
  static HermitianOperator zero(int dim);

private:
  Matrix mat_;
};

enum class StateKind { normalized, subnormalized };

/// Validated density operator: PSD, trace one (normalized) or at most one
/// (subnormalized, the smoothing set). Eigenvalues in [-1e-8, 0) are clipped
/// to zero; a trace within 1e-8 of the target is snapped onto it.
class DensityOperator {
public:
  const HermitianOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  int dim() const { return op_.dim(); }
  StateKind kind() const { return kind_; }
  double trace() const { return op_.trace(); }

  friend DensityOperator make_density(const Matrix& m, StateKind kind);

private:
  DensityOperator(HermitianOperator op, StateKind kind) : op_(std::move(op)), kind_(kind) {}
  HermitianOperator op_;
  StateKind kind_;
};

DensityOperator make_density(const Matrix& m, StateKind kind);

/// Completely positive trace-preserving map in Kraus form. Kraus operators
/// are out_dim x in_dim; trace preservation sum_k K_k^dag K_k = I is
/// re-normalized at construction when within 1e-8, rejected otherwise.
class QuantumChannel {
public:
  explicit QuantumChannel(std::vector<Matrix> kraus);

  int input_dim() const { return in_dim_; }
  int output_dim() const { return out_dim_; }
  const std::vector<Matrix>& kraus() const { return kraus_; }

private:
  std::vector<Matrix> kraus_;
  int in_dim_ = 0;
  int out_dim_ = 0;
};

/// Tensor factorization tag for a bipartite operator. Index convention is
/// A-major: composite index = a * dimB + b.
struct BipartiteLabel {
  int dimA = 1;
  int dimB = 1;

  BipartiteLabel(int a, int b) : dimA(a), dimB(b) {
    if (a < 1 || b < 1) throw BadFactorization("BipartiteLabel: dimensions must be positive");
  }
  int dim() const { return dimA * dimB; }
  void check(int operator_dim) const {
    if (dim() != operator_dim)
      throw BadFactorization("BipartiteLabel: dimA*dimB = " + std::to_string(dim()) +
                             " does not factor operator dim " + std::to_string(operator_dim));
  }
};

enum class Subsystem { A, B };

// --- core operations ---------------------------------------------------

/// Uhlmann fidelity F(A,B) = ||sqrt(A) sqrt(B)||_1^2 for PSD operators,
/// computed spectrally as (Tr sqrt(sqrt(A) B sqrt(A)))^2.
double fidelity(const Matrix& a, const Matrix& b);
double fidelity(const DensityOperator& a, const DensityOperator& b);
/// Root fidelity ||sqrt(A) sqrt(B)||_1.
double root_fidelity(const Matrix& a, const Matrix& b);

Matrix apply_channel(const QuantumChannel& n, const Matrix& a);
DensityOperator apply_channel(const QuantumChannel& n, const DensityOperator& rho);

Matrix partial_trace(const Matrix& a, const BipartiteLabel& label, Subsystem keep);
Matrix tensor(const Matrix& a, const Matrix& b);

enum class MatrixFunction { sqrt, log2_on_support, power };

/// Apply fn in the eigenbasis of a PSD operator. Eigenvalues below 1e-12 are
/// treated as exact zeros (log/power restricted to the support); eigenvalues
/// below -1e-8 raise NegativeEigenvalue.
Matrix matrix_function(const Matrix& a, MatrixFunction fn, double exponent = 0.0);

Matrix matrix_sqrt(const Matrix& a);
Matrix matrix_log2_on_support(const Matrix& a);
Matrix matrix_power(const Matrix& a, double exponent);
/// Projector onto the support (eigenvalues > 1e-12).
Matrix support_projector(const Matrix& a);

// --- deterministic random instances ------------------------------------

using Rng = std::mt19937_64;

DensityOperator random_state(Rng& rng, int dim);
Matrix random_psd(Rng& rng, int dim);
Matrix random_pure_state(Rng& rng, int dim);
QuantumChannel random_channel(Rng& rng, int dim, int kraus_rank);

DensityOperator random_state(std::uint64_t seed, int dim);
Matrix random_psd(std::uint64_t seed, int dim);
QuantumChannel random_channel(std::uint64_t seed, int dim, int kraus_rank);

} // namespace smoothdiv
