#pragma once

#include "mpp/pomdp.hpp"

namespace mpp {

/// Nonnegative per-principal weights summing to 1 (within kWeightTolerance).
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> values);

  /// Rescales arbitrary nonnegative weights to sum to 1. The largest entry is
  /// then adjusted so the floating-point sum is exactly 1.0.
  static WeightVector normalized(std::vector<double> raw);
  static WeightVector uniform(int size);

  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int j) const { return values_[j]; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

/// The compound POMDP built from a weighted coin over principals: states are
/// (principal, state) pairs, the coin value never changes along a run, and
/// utility on a tagged run is the tagged principal's utility.
struct MixturePomdp {
  PrincipalPomdp pomdp;
  WeightVector weights;
  std::vector<int> tag_of_state;  // principal index per compound state
  std::vector<int> base_state;    // index within that principal's own space
};

/// Builds w^1 D^1 + ... + w^k D^k. Compound state labels are synthesized as
/// "j:state" with 1-based principal numbers. Utilities are mapped exactly:
/// all-additive inputs stay additive; otherwise a sequence table over
/// same-tag runs is materialized, which requires any additive inputs to have
/// action-independent step rewards.
MixturePomdp build_mixture(const ProblemSet& problems, const WeightVector& weights,
                           std::uint64_t utility_table_cap = kDefaultPolicyTableCap);

struct PosteriorResult {
  std::vector<double> weights;  // per principal, sums to 1
  bool degenerate = false;      // every principal gave the history probability 0
};

/// Posterior over which principal's model generated the observations,
/// starting from the given weights: w^j * P^j(o_{<=i} | Do(a_{<i})),
/// normalized over j. Likelihoods are rescaled by their maximum before
/// normalizing, which guards against underflow. A history no principal can
/// explain yields the uniform vector with the degenerate flag set.
PosteriorResult principal_posterior(const ProblemSet& problems, const WeightVector& weights,
                                    const History& history);

/// The normalization step of principal_posterior, exposed for callers that
/// already hold the per-principal likelihoods.
PosteriorResult posterior_from_likelihoods(const WeightVector& weights,
                                           std::span<const double> likelihoods);

}  // namespace mpp
