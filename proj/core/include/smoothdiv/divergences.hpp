#pragma once

#include <limits>

#include "smoothdiv/operators.hpp"

namespace smoothdiv {

/// Value of a divergence in bits. The +inf branch is reported exactly when
/// the support condition supp(rho) <= supp(sigma) fails.
struct DivergenceValue {
  double bits = 0.0;
  bool support_condition_met = true;

  bool is_infinite() const { return !std::isfinite(bits); }
  static DivergenceValue infinite() {
    return {std::numeric_limits<double>::infinity(), false};
  }
};

/// Quantum relative entropy D(rho||sigma) = Tr[rho (log2 rho - log2 sigma)],
/// base 2; +inf when rho leaks out of supp(sigma) by more than 1e-9.
DivergenceValue relative_entropy(const DensityOperator& rho, const Matrix& sigma);

/// Relative entropy variance V(rho||sigma) = Tr[rho (log2 rho - log2 sigma)^2] - D^2.
DivergenceValue relative_entropy_variance(const DensityOperator& rho, const Matrix& sigma);

/// Sandwiched Renyi relative entropy of order alpha in (0,1) or (1,inf).
DivergenceValue sandwiched_renyi(const DensityOperator& rho, const Matrix& sigma, double alpha);

/// Petz-Renyi relative entropy of order alpha in (0,1) or (1,inf).
DivergenceValue petz_renyi(const DensityOperator& rho, const Matrix& sigma, double alpha);

/// Max-relative entropy: log2 of the smallest lambda with rho <= lambda sigma.
DivergenceValue d_max(const DensityOperator& rho, const Matrix& sigma);

/// Min-relative entropy -log2 Tr[Pi_rho sigma] (support projector variant).
DivergenceValue d_min_projector(const DensityOperator& rho, const Matrix& sigma);

/// Fidelity-based min-relative entropy -log2 F(rho, sigma).
DivergenceValue d_min_f(const DensityOperator& rho, const Matrix& sigma);

struct MutualInformationResult {
  double bits;          // I(A;B)
  double variance_bits; // V(A;B)
};

/// Mutual information I(A;B) = D(rho_AB || rho_A x rho_B) and its variance.
MutualInformationResult mutual_information_and_variance(const DensityOperator& rho_ab,
                                                        const BipartiteLabel& label);

} // namespace smoothdiv
