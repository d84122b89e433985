#pragma once

#include "mpp/pomdp.hpp"

namespace mpp {

/// Joint probability of a complete run under one principal's model:
/// prior(s_1) * prod_i obs(o_i|s_i) * pi(a_i|h_i) * trans(s_{i+1}|s_i,a_i).
double joint_probability(const PrincipalPomdp& pomdp, const Outcome& outcome,
                         const FullMemoryPolicy& policy);

/// Probability of an observation sequence with the actions externally fixed,
/// marginalizing over states. Accepts len(actions) equal to len(observations)
/// or one less; a trailing action adds no information and is ignored. The
/// empty sequence has probability 1.
double causal_obs_probability(const PrincipalPomdp& pomdp,
                              std::span<const int> observations,
                              std::span<const int> actions);

/// Exact expected utility by enumeration over all runs.
double evaluate(const PrincipalPomdp& pomdp, const FullMemoryPolicy& policy);

/// Expected utility of a time-0 lottery over policies (linear in the
/// coefficients).
double evaluate(const PrincipalPomdp& pomdp, const MixedPolicy& policy);

/// Unnormalized continuation value G(h_i, a) for every action a: the sum over
/// all run completions consistent with h_i — with a_i = a and future actions
/// drawn from `policy` — of run probability times utility. Only policy steps
/// after the history's step are consulted. No division by the history
/// probability ever happens, so impossible histories give identically zero
/// values.
std::vector<double> continuation_values(const PrincipalPomdp& pomdp, const History& history,
                                        const FullMemoryPolicy& policy);

/// G(h_i, alpha) for a distribution alpha over the next action; linear in
/// alpha, so this is the dot product of alpha with continuation_values.
double continuation_value_unnormalized(const PrincipalPomdp& pomdp, const History& history,
                                       std::span<const double> action_dist,
                                       const FullMemoryPolicy& policy);

}  // namespace mpp
