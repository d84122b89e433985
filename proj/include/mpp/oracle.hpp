#pragma once

#include <array>
#include <optional>

#include "mpp/pomdp.hpp"

namespace mpp {

/// Exhaustive, duplicate-free stream of every deterministic full-memory
/// policy for a given (observations, actions, horizon) shape. A policy is a
/// choice of one action per history; `slots` holds these choices with steps
/// concatenated and histories ordered by history_index.
class PolicyEnumeration {
 public:
  PolicyEnumeration(int horizon, int num_observations, int num_actions,
                    std::uint64_t cap = kDefaultEnumerationCap);

  std::uint64_t total_count() const { return total_count_; }
  std::uint64_t num_slots() const { return slots_; }

  /// Fills `slots` with the next assignment; false once exhausted.
  bool next(std::vector<int>& slots);

  FullMemoryPolicy materialize(std::span<const int> slots) const;

  int horizon() const { return horizon_; }
  int num_observations() const { return num_observations_; }
  int num_actions() const { return num_actions_; }

 private:
  int horizon_;
  int num_observations_;
  int num_actions_;
  std::uint64_t slots_ = 0;
  std::uint64_t total_count_ = 1;
  bool started_ = false;
};

/// Payoff vectors of every deterministic policy, one row per policy in
/// enumeration order. Stored flat; row(i) is the i-th policy's per-principal
/// expected utilities, computed by the oracle's own direct outcome
/// enumeration (independent of the solver and kernel code paths).
struct PayoffTable {
  int num_principals = 0;
  std::uint64_t num_policies = 0;
  std::vector<double> values;

  std::span<const double> row(std::uint64_t i) const {
    return {values.data() + i * num_principals, static_cast<std::size_t>(num_principals)};
  }
  std::vector<std::vector<double>> to_points() const;
};

PayoffTable brute_force_payoffs(const ProblemSet& problems,
                                std::uint64_t cap = kDefaultEnumerationCap);

struct ParetoVerdict {
  bool pareto_optimal = false;
  std::vector<double> witness;  // a dominating payoff point, when not optimal
  std::string detail;
};

/// Checks a candidate payoff against the convex hull of all deterministic
/// policy payoffs (mixing policies at time 0 fills in the hull). For two
/// principals the full hull is searched; otherwise only vertex dominance is
/// checked. Tolerance 1e-9 on both coordinatewise comparisons.
ParetoVerdict verify_pareto(const ProblemSet& problems, std::span<const double> candidate,
                            std::uint64_t cap = kDefaultEnumerationCap);

struct Prop1Entry {
  double r = 0.0;
  // Maximizers of the fixed-r objective, per observation.
  std::vector<std::vector<int>> argmax_actions;
  // Payoff of every pure per-observation selection among those maximizers.
  std::vector<std::vector<double>> selection_payoffs;
  // Hull point maximizing min_j(payoff_j - target_j), and that maximum.
  std::vector<double> best_payoff;
  double best_gap = 0.0;
  bool achieves_target = false;
};

struct Prop1Report {
  std::vector<double> target;
  std::vector<Prop1Entry> entries;          // sorted by r
  std::vector<double> change_points;        // r where the argmax profile changes
  bool impossibility_confirmed = false;     // no r reaches the target
};

/// Tests whether any fixed-over-time linear combination of two principals'
/// conditionally expected utilities can reach the target payoff in a
/// single-step problem. The r grid is augmented with {0, 1/3, 2/3, 1} and
/// with every exact crossing point of the per-observation objectives, so tie
/// regions are probed exactly; mixed selections are covered through the
/// convex hull of the pure ones.
Prop1Report prop1_verify(const ProblemSet& problems, std::span<const double> target,
                         int r_grid, std::uint64_t cap = kDefaultEnumerationCap);

/// Convex hull of 2-D points (monotone chain), counterclockwise, no
/// duplicates. Collinear boundary points are dropped.
std::vector<std::array<double, 2>> convex_hull_2d(std::vector<std::array<double, 2>> points);

/// Largest value of min(x - target_x, y - target_y) over the hull of the
/// given points, together with an attaining point.
std::pair<double, std::array<double, 2>> max_min_gap_over_hull(
    const std::vector<std::array<double, 2>>& points, const std::array<double, 2>& target);

}  // namespace mpp
