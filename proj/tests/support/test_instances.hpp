#pragma once

#include <random>
#include <string>
#include <vector>

#include "mpp/mixture.hpp"
#include "mpp/pomdp.hpp"
#include "mpp/util.hpp"

namespace mpp::testing {

enum class UtilityMode {
  kAdditive,      // action-dependent step rewards plus terminal rewards
  kTable,         // explicit sequence table with a default
  kTerminalOnly,  // additive with zero step rewards (state-only)
};

struct InstanceOptions {
  int num_principals = 2;
  int max_states = 3;
  int max_actions = 3;
  int max_observations = 3;
  int max_horizon = 2;
  bool shared_beliefs = false;
  bool mixed_utility_variants = false;  // principal 1 terminal-only, principal 2 table
};

inline std::vector<std::string> make_labels(const std::string& prefix, int count) {
  std::vector<std::string> labels;
  for (int i = 0; i < count; ++i) labels.push_back(prefix + std::to_string(i));
  return labels;
}

// Rows are bounded away from zero so most histories keep positive probability.
inline std::vector<double> random_distribution(std::mt19937_64& rng, int size) {
  std::uniform_real_distribution<double> uniform(0.05, 1.0);
  std::vector<double> row(size);
  double sum = 0.0;
  for (double& p : row) {
    p = uniform(rng);
    sum += p;
  }
  for (double& p : row) p /= sum;
  return row;
}

inline UtilitySpec random_utility(std::mt19937_64& rng, UtilityMode mode, int num_states,
                                  int num_actions, int horizon) {
  std::uniform_real_distribution<double> value(0.0, 10.0);
  if (mode == UtilityMode::kTable) {
    SequenceTableUtility table;
    table.default_value = value(rng);
    std::vector<int> sequence(horizon + 1, 0);
    do {
      table.entries.emplace(sequence, value(rng));
    } while (next_assignment(sequence, num_states));
    return table;
  }
  AdditiveUtility additive;
  additive.step.assign(num_states, std::vector<std::vector<double>>(
                                       num_actions, std::vector<double>(num_states, 0.0)));
  additive.terminal.resize(num_states);
  for (double& v : additive.terminal) v = value(rng);
  if (mode == UtilityMode::kAdditive) {
    for (auto& by_action : additive.step)
      for (auto& row : by_action)
        for (double& v : row) v = value(rng);
  }
  return additive;
}

inline PrincipalPomdp random_principal(std::mt19937_64& rng, const std::string& name,
                                       const std::vector<std::string>& actions,
                                       const std::vector<std::string>& observations,
                                       int horizon, int num_states, UtilityMode mode) {
  PrincipalPomdp pomdp;
  pomdp.name = name;
  pomdp.state_labels = make_labels("s", num_states);
  pomdp.action_labels = actions;
  pomdp.observation_labels = observations;
  pomdp.horizon = horizon;
  pomdp.prior = random_distribution(rng, num_states);
  pomdp.transition.resize(num_states);
  for (auto& by_action : pomdp.transition) {
    by_action.resize(actions.size());
    for (auto& row : by_action) row = random_distribution(rng, num_states);
  }
  pomdp.observation.resize(num_states);
  for (auto& row : pomdp.observation)
    row = random_distribution(rng, static_cast<int>(observations.size()));
  pomdp.utility = random_utility(rng, mode, num_states, static_cast<int>(actions.size()),
                                 horizon);
  return pomdp;
}

inline ProblemSet random_problem_set(std::mt19937_64& rng,
                                     const InstanceOptions& options = {}) {
  auto draw = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  const int horizon = draw(1, options.max_horizon);
  const int num_actions = draw(2, options.max_actions);
  const int num_observations = draw(2, options.max_observations);
  const auto actions = make_labels("a", num_actions);
  const auto observations = make_labels("o", num_observations);

  ProblemSet problems;
  if (options.shared_beliefs) {
    const int num_states = draw(2, options.max_states);
    PrincipalPomdp base = random_principal(rng, "p1", actions, observations, horizon,
                                           num_states, UtilityMode::kTerminalOnly);
    for (int j = 0; j < options.num_principals; ++j) {
      PrincipalPomdp pomdp = base;
      pomdp.name = "p" + std::to_string(j + 1);
      pomdp.utility = random_utility(rng, UtilityMode::kTerminalOnly, num_states,
                                     num_actions, horizon);
      problems.principals.push_back(std::move(pomdp));
    }
    return problems;
  }

  UtilityMode shared_mode =
      draw(0, 1) == 0 ? UtilityMode::kAdditive : UtilityMode::kTable;
  for (int j = 0; j < options.num_principals; ++j) {
    UtilityMode mode = shared_mode;
    if (options.mixed_utility_variants)
      mode = j == 0 ? UtilityMode::kTerminalOnly : UtilityMode::kTable;
    problems.principals.push_back(random_principal(
        rng, "p" + std::to_string(j + 1), actions, observations, horizon,
        draw(2, options.max_states), mode));
  }
  return problems;
}

inline FullMemoryPolicy random_policy(std::mt19937_64& rng, int horizon,
                                      int num_observations, int num_actions) {
  FullMemoryPolicy policy =
      FullMemoryPolicy::uniform(horizon, num_observations, num_actions);
  for (auto& step : policy.steps)
    for (auto& dist : step) dist = random_distribution(rng, num_actions);
  return policy;
}

inline FullMemoryPolicy random_deterministic_policy(std::mt19937_64& rng, int horizon,
                                                    int num_observations, int num_actions) {
  FullMemoryPolicy policy =
      FullMemoryPolicy::pure_constant(horizon, num_observations, num_actions, 0);
  std::uniform_int_distribution<int> pick(0, num_actions - 1);
  for (auto& step : policy.steps) {
    for (auto& dist : step) {
      std::fill(dist.begin(), dist.end(), 0.0);
      dist[pick(rng)] = 1.0;
    }
  }
  return policy;
}

inline WeightVector random_weights(std::mt19937_64& rng, int size) {
  std::uniform_real_distribution<double> uniform(0.01, 1.0);
  std::vector<double> raw(size);
  for (double& w : raw) w = uniform(rng);
  return WeightVector::normalized(raw);
}

}  // namespace mpp::testing
