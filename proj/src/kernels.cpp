#include "mpp/kernels.hpp"

#include <cmath>

#include "mpp/util.hpp"

namespace mpp {
namespace {

void require_shape(const PrincipalPomdp& pomdp, const FullMemoryPolicy& policy) {
  if (!policy.shape_matches(pomdp))
    throw std::invalid_argument("policy is incompatible with the POMDP (actions, "
                                "observations, or horizon differ)");
}

// Sum over all state sequences of the environment-chain probability times
// utility, for fixed observation and action sequences.
double state_sum(const PrincipalPomdp& pomdp, std::span<const int> observations,
                 std::span<const int> actions) {
  const int n = pomdp.horizon;
  std::vector<int> states(n + 1, 0);
  double total = 0.0;
  do {
    double p = pomdp.prior[states[0]];
    for (int t = 0; t < n && p != 0.0; ++t) {
      p *= pomdp.observation[states[t]][observations[t]];
      p *= pomdp.transition[states[t]][actions[t]][states[t + 1]];
    }
    if (p != 0.0) total += p * pomdp.utility_of(states, actions);
  } while (next_assignment(states, pomdp.num_states()));
  return total;
}

}  // namespace

double joint_probability(const PrincipalPomdp& pomdp, const Outcome& outcome,
                         const FullMemoryPolicy& policy) {
  require_shape(pomdp, policy);
  const int n = pomdp.horizon;
  if (static_cast<int>(outcome.states.size()) != n + 1 ||
      static_cast<int>(outcome.observations.size()) != n ||
      static_cast<int>(outcome.actions.size()) != n)
    throw std::invalid_argument("outcome dimensions do not match the horizon");

  double p = pomdp.prior[outcome.states[0]];
  History history;
  for (int t = 0; t < n; ++t) {
    history.observations.push_back(outcome.observations[t]);
    p *= pomdp.observation[outcome.states[t]][outcome.observations[t]];
    p *= policy.prob(history, outcome.actions[t]);
    p *= pomdp.transition[outcome.states[t]][outcome.actions[t]][outcome.states[t + 1]];
    history.actions.push_back(outcome.actions[t]);
  }
  return p;
}

double causal_obs_probability(const PrincipalPomdp& pomdp,
                              std::span<const int> observations,
                              std::span<const int> actions) {
  const int m = static_cast<int>(observations.size());
  const int na = static_cast<int>(actions.size());
  if (na != m && na != m - 1)
    throw std::invalid_argument("causal_obs_probability: need len(actions) in "
                                "{len(observations)-1, len(observations)}");
  if (m > pomdp.horizon)
    throw std::invalid_argument("causal_obs_probability: more observations than the horizon");
  for (int o : observations)
    if (o < 0 || o >= pomdp.num_observations())
      throw std::invalid_argument("causal_obs_probability: invalid observation index");
  for (int a : actions)
    if (a < 0 || a >= pomdp.num_actions())
      throw std::invalid_argument("causal_obs_probability: invalid action index");
  if (m == 0) return 1.0;

  // Forward pass over the unnormalized filtering vector.
  const int ns = pomdp.num_states();
  std::vector<double> belief(ns), next(ns);
  for (int s = 0; s < ns; ++s)
    belief[s] = pomdp.prior[s] * pomdp.observation[s][observations[0]];
  for (int t = 1; t < m; ++t) {
    const int a = actions[t - 1];
    for (int s2 = 0; s2 < ns; ++s2) {
      double mass = 0.0;
      for (int s = 0; s < ns; ++s) mass += belief[s] * pomdp.transition[s][a][s2];
      next[s2] = mass * pomdp.observation[s2][observations[t]];
    }
    belief.swap(next);
  }
  double total = 0.0;
  for (double b : belief) total += b;
  return total;
}

double evaluate(const PrincipalPomdp& pomdp, const FullMemoryPolicy& policy) {
  require_shape(pomdp, policy);
  const int n = pomdp.horizon;
  const int no = pomdp.num_observations();
  const int na = pomdp.num_actions();

  std::vector<int> observations(n, 0);
  std::vector<int> actions(n, 0);
  double total = 0.0;
  do {
    do {
      // Policy weight of this (observations, actions) pair.
      double pol = 1.0;
      History history;
      for (int t = 0; t < n && pol != 0.0; ++t) {
        history.observations.push_back(observations[t]);
        pol *= policy.prob(history, actions[t]);
        history.actions.push_back(actions[t]);
      }
      if (pol != 0.0) total += pol * state_sum(pomdp, observations, actions);
    } while (next_assignment(actions, na));
  } while (next_assignment(observations, no));
  return total;
}

double evaluate(const PrincipalPomdp& pomdp, const MixedPolicy& policy) {
  if (policy.coefficients.size() != policy.components.size())
    throw std::invalid_argument("mixed policy: one coefficient per component required");
  if (policy.components.empty())
    throw std::invalid_argument("mixed policy: no components");
  double sum = 0.0;
  for (double c : policy.coefficients) {
    if (c < 0.0) throw std::invalid_argument("mixed policy: negative coefficient");
    sum += c;
  }
  if (std::abs(sum - 1.0) > kProbTolerance)
    throw std::invalid_argument("mixed policy: coefficients do not sum to 1");
  double total = 0.0;
  for (std::size_t r = 0; r < policy.components.size(); ++r)
    total += policy.coefficients[r] * evaluate(pomdp, policy.components[r]);
  return total;
}

std::vector<double> continuation_values(const PrincipalPomdp& pomdp, const History& history,
                                        const FullMemoryPolicy& policy) {
  require_shape(pomdp, policy);
  const int n = pomdp.horizon;
  const int i = history.step();
  if (i < 1 || i > n)
    throw std::invalid_argument("continuation_values: history step must be in 1..horizon");
  if (static_cast<int>(history.actions.size()) != i - 1)
    throw std::invalid_argument("continuation_values: malformed history");

  const int no = pomdp.num_observations();
  const int na = pomdp.num_actions();

  std::vector<int> observations(history.observations.begin(), history.observations.end());
  observations.resize(n, 0);
  std::vector<int> actions(history.actions.begin(), history.actions.end());
  actions.resize(n, 0);

  std::vector<int> future_obs(n - i, 0);
  std::vector<int> future_act(n - i, 0);
  std::vector<double> values(na, 0.0);

  for (int a = 0; a < na; ++a) {
    actions[i - 1] = a;
    std::fill(future_obs.begin(), future_obs.end(), 0);
    double total = 0.0;
    do {
      for (int t = 0; t < n - i; ++t) observations[i + t] = future_obs[t];
      std::fill(future_act.begin(), future_act.end(), 0);
      do {
        double pol = 1.0;
        History future_history{{observations.begin(), observations.begin() + i},
                               {actions.begin(), actions.begin() + i - 1}};
        for (int t = 0; t < n - i && pol != 0.0; ++t) {
          future_history.actions.push_back(t == 0 ? a : future_act[t - 1]);
          future_history.observations.push_back(future_obs[t]);
          pol *= policy.prob(future_history, future_act[t]);
        }
        if (pol != 0.0) {
          for (int t = 0; t < n - i; ++t) actions[i + t] = future_act[t];
          total += pol * state_sum(pomdp, observations, actions);
        }
      } while (next_assignment(future_act, na));
    } while (next_assignment(future_obs, no));
    values[a] = total;
  }
  return values;
}

double continuation_value_unnormalized(const PrincipalPomdp& pomdp, const History& history,
                                       std::span<const double> action_dist,
                                       const FullMemoryPolicy& policy) {
  if (static_cast<int>(action_dist.size()) != pomdp.num_actions())
    throw std::invalid_argument("continuation_value: action distribution size mismatch");
  const std::vector<double> values = continuation_values(pomdp, history, policy);
  double total = 0.0;
  for (int a = 0; a < pomdp.num_actions(); ++a) total += action_dist[a] * values[a];
  return total;
}

}  // namespace mpp
