#pragma once

#include "mpp/mixture.hpp"
#include "mpp/pomdp.hpp"

namespace mpp {

/// An exact solve: the policy, its per-principal expected utilities, the
/// weights used, and the per-history objective values the argmax saw.
struct SolveResult {
  FullMemoryPolicy policy;
  std::vector<double> payoff;
  WeightVector weights_used;
  // history_values[i-1][hidx][a]: objective value of pure action a at that
  // history during the backward pass.
  std::vector<std::vector<std::vector<double>>> history_values;
};

/// Classical finite-horizon solve of one POMDP by backward recursion over
/// histories. At every history the chosen action maximizes the unnormalized
/// continuation value; ties and impossible histories resolve to the earliest
/// action in declared label order. Deterministic.
SolveResult bellman_solve(const PrincipalPomdp& pomdp,
                          std::uint64_t cap = kDefaultPolicyTableCap);

/// Pareto-optimal solve for a set of compatible POMDPs: the same backward
/// recursion, maximizing sum_j w^j * G^j(h, a) with each G^j computed in
/// principal j's own model. Tie-breaking as in bellman_solve.
SolveResult pareto_solve(const ProblemSet& problems, const WeightVector& weights,
                         std::uint64_t cap = kDefaultPolicyTableCap);

struct FrontierPoint {
  WeightVector weights;  // first grid weight that produced this payoff
  std::vector<double> payoff;
  FullMemoryPolicy policy;
  std::string policy_id;  // stable hash of the policy table
};

/// Sweeps pareto_solve over a uniform grid of two-principal weights,
/// deduplicates payoffs (L-inf distance < 1e-7), drops dominated points, and
/// returns the survivors sorted by w1.
std::vector<FrontierPoint> frontier_sweep(const ProblemSet& problems, int grid_size,
                                          std::uint64_t cap = kDefaultPolicyTableCap);

/// Optional per-observation override for choosing among tied actions: maps an
/// observation index to the action to prefer when it attains the maximum.
/// Histories whose last observation has no override (or whose override is not
/// maximal) take the earliest maximal action.
struct SelectionRule {
  std::map<int, int> per_observation_action;
};

/// Fixed-weight baseline for two principals: at every history, maximizes
/// r * E^1[U^1 | h] + (1-r) * E^2[U^2 | h], each conditional expectation
/// normalized within its own principal's model (a principal that assigns the
/// history probability zero contributes 0). The weights never shift over
/// time, which is exactly what makes this rule fall short of Pareto
/// optimality when priors differ.
SolveResult naive_solve(const ProblemSet& problems, double r,
                        const SelectionRule& selection = {},
                        std::uint64_t cap = kDefaultPolicyTableCap);

/// Stable identifier for a policy table (used in frontier CSV output).
std::string policy_hash(const FullMemoryPolicy& policy);

}  // namespace mpp
