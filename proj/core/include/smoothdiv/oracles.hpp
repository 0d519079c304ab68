#pragma once

#include <cstdint>
#include <vector>

#include "smoothdiv/operators.hpp"
#include "smoothdiv/solver.hpp"

namespace smoothdiv::oracle {

/// Nonnegative masses summing to at most one (sub-distributions allowed).
struct ClassicalDistribution {
  std::vector<double> masses;

  explicit ClassicalDistribution(std::vector<double> m);
  double total() const;
  std::size_t size() const { return masses.size(); }
};

struct NeymanPearsonResult {
  double bits = 0.0;             // -log2 beta; +inf when beta underflows to zero
  double log2_beta = 0.0;        // exact in log space
  std::vector<double> test;      // optimal test vector, entries in [0,1]
};

/// Classical Neyman-Pearson oracle: sort outcomes by likelihood ratio p/q
/// descending, fill p-mass greedily to exactly 1-eps with one fractional
/// class (equal-ratio outcomes merged), report -log2 of the accumulated
/// q-mass. Exact up to float arithmetic.
NeymanPearsonResult neyman_pearson(const ClassicalDistribution& p, const ClassicalDistribution& q,
                                   double eps);

/// Exact product-distribution Neyman-Pearson via type-class aggregation.
/// Binary alphabets up to n = 5000 (binomial collapsing, log-space masses);
/// alphabets up to 4 for n <= 12 (composition enumeration).
double iid_neyman_pearson(const ClassicalDistribution& p, const ClassicalDistribution& q, long long n,
                          double eps);

// diagonal divergence formulas (commuting-case references)
double kl_bits(const std::vector<double>& p, const std::vector<double>& q);
double kl_variance_bits(const std::vector<double>& p, const std::vector<double>& q);
double renyi_bits(const std::vector<double>& p, const std::vector<double>& q, double alpha);
double bhattacharyya_fidelity(const std::vector<double>& p, const std::vector<double>& q);
double binary_entropy_bits(double p);

/// Certified lower bound on D^eps_minF via random feasible candidates
/// (mixes of rho with random pure states rescaled onto the equality face)
/// plus one block-SDP polish of the best candidate. Independent check on the
/// seesaw: any feasible rho_tilde certifies a bound since the program
/// minimizes.
double multistart_dminf(const DensityOperator& rho, const Matrix& sigma, double eps, int samples,
                        std::uint64_t seed = 0, const SolverOptions& opts = {});

} // namespace smoothdiv::oracle
