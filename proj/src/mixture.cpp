#include "mpp/mixture.hpp"

#include <cmath>

#include "mpp/kernels.hpp"
#include "mpp/util.hpp"

namespace mpp {
namespace {

bool step_rewards_action_independent(const AdditiveUtility& utility) {
  for (const auto& by_action : utility.step) {
    for (std::size_t a = 1; a < by_action.size(); ++a)
      if (by_action[a] != by_action[0]) return false;
  }
  return true;
}

// Value of a state sequence for utilities that do not depend on actions.
double action_free_value(const PrincipalPomdp& pomdp, std::span<const int> states) {
  const std::vector<int> dummy_actions(pomdp.horizon, 0);
  return pomdp.utility_of(states, dummy_actions);
}

}  // namespace

WeightVector::WeightVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("weight vector is empty");
  double sum = 0.0;
  for (double w : values_) {
    if (!(w >= 0.0)) throw std::invalid_argument("weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kWeightTolerance)
    throw std::invalid_argument("weights must sum to 1");
}

WeightVector WeightVector::normalized(std::vector<double> raw) {
  if (raw.empty()) throw std::invalid_argument("weight vector is empty");
  double sum = 0.0;
  std::size_t largest = 0;
  for (std::size_t j = 0; j < raw.size(); ++j) {
    if (!(raw[j] >= 0.0)) throw std::invalid_argument("weights must be nonnegative");
    sum += raw[j];
    if (raw[j] > raw[largest]) largest = j;
  }
  if (sum <= 0.0) throw std::invalid_argument("weights must have positive total mass");
  for (double& w : raw) w /= sum;
  double rest = 0.0;
  for (std::size_t j = 0; j < raw.size(); ++j)
    if (j != largest) rest += raw[j];
  raw[largest] = 1.0 - rest;
  return WeightVector(std::move(raw));
}

WeightVector WeightVector::uniform(int size) {
  if (size < 1) throw std::invalid_argument("weight vector is empty");
  return normalized(std::vector<double>(size, 1.0));
}

MixturePomdp build_mixture(const ProblemSet& problems, const WeightVector& weights,
                           std::uint64_t utility_table_cap) {
  problems.require_compatible();
  const int k = problems.size();
  if (weights.size() != k)
    throw std::invalid_argument("one weight per principal required");

  const int n = problems.horizon();
  MixturePomdp mixture{PrincipalPomdp{}, weights, {}, {}};
  PrincipalPomdp& out = mixture.pomdp;
  out.name = "mixture";
  out.horizon = n;
  out.action_labels = problems.action_labels();
  out.observation_labels = problems.observation_labels();

  std::vector<int> offset(k, 0);
  for (int j = 0; j < k; ++j) {
    const auto& part = problems.principals[j];
    offset[j] = static_cast<int>(out.state_labels.size());
    for (int s = 0; s < part.num_states(); ++s) {
      out.state_labels.push_back(std::to_string(j + 1) + ":" + part.state_labels[s]);
      mixture.tag_of_state.push_back(j);
      mixture.base_state.push_back(s);
    }
  }
  const int ns = static_cast<int>(out.state_labels.size());
  const int na = static_cast<int>(out.action_labels.size());
  const int no = static_cast<int>(out.observation_labels.size());

  out.prior.assign(ns, 0.0);
  out.transition.assign(ns, std::vector<std::vector<double>>(na, std::vector<double>(ns, 0.0)));
  out.observation.assign(ns, std::vector<double>(no, 0.0));
  for (int j = 0; j < k; ++j) {
    const auto& part = problems.principals[j];
    for (int s = 0; s < part.num_states(); ++s) {
      const int cs = offset[j] + s;
      out.prior[cs] = weights[j] * part.prior[s];
      out.observation[cs] = part.observation[s];
      for (int a = 0; a < na; ++a)
        for (int s2 = 0; s2 < part.num_states(); ++s2)
          out.transition[cs][a][offset[j] + s2] = part.transition[s][a][s2];
    }
  }

  bool all_additive = true;
  bool table_convertible = true;  // every component's value is a function of states alone
  for (const auto& part : problems.principals) {
    if (const auto* additive = std::get_if<AdditiveUtility>(&part.utility)) {
      if (!step_rewards_action_independent(*additive)) table_convertible = false;
    } else {
      all_additive = false;
    }
  }

  if (all_additive) {
    AdditiveUtility utility;
    utility.step.assign(ns, std::vector<std::vector<double>>(na, std::vector<double>(ns, 0.0)));
    utility.terminal.assign(ns, 0.0);
    for (int j = 0; j < k; ++j) {
      const auto& part = std::get<AdditiveUtility>(problems.principals[j].utility);
      const int count = problems.principals[j].num_states();
      for (int s = 0; s < count; ++s) {
        utility.terminal[offset[j] + s] = part.terminal[s];
        for (int a = 0; a < na; ++a)
          for (int s2 = 0; s2 < count; ++s2)
            utility.step[offset[j] + s][a][offset[j] + s2] = part.step[s][a][s2];
      }
    }
    out.utility = std::move(utility);
  } else {
    if (!table_convertible)
      throw std::invalid_argument(
          "cannot mix action-dependent additive utilities with sequence tables; "
          "the compound utility would not be a function of state sequences");
    std::uint64_t total_entries = 0;
    for (const auto& part : problems.principals) {
      std::uint64_t count = 1;
      for (int t = 0; t <= n; ++t) {
        count *= static_cast<std::uint64_t>(part.num_states());
        if (count > utility_table_cap) break;
      }
      total_entries += count;
    }
    if (total_entries > utility_table_cap)
      throw SizeCapError("compound utility table would need " +
                         std::to_string(total_entries) + " entries, exceeding the cap of " +
                         std::to_string(utility_table_cap));

    SequenceTableUtility utility;
    utility.default_value = 0.0;  // only ever read on zero-probability cross-tag runs
    for (int j = 0; j < k; ++j) {
      const auto& part = problems.principals[j];
      std::vector<int> states(n + 1, 0);
      std::vector<int> tagged(n + 1, 0);
      do {
        for (int t = 0; t <= n; ++t) tagged[t] = offset[j] + states[t];
        utility.entries.emplace(tagged, action_free_value(part, states));
      } while (next_assignment(states, part.num_states()));
    }
    out.utility = std::move(utility);
  }
  return mixture;
}

PosteriorResult posterior_from_likelihoods(const WeightVector& weights,
                                           std::span<const double> likelihoods) {
  const int k = weights.size();
  if (static_cast<int>(likelihoods.size()) != k)
    throw std::invalid_argument("one likelihood per principal required");
  double max_likelihood = 0.0;
  for (double l : likelihoods) max_likelihood = std::max(max_likelihood, l);

  PosteriorResult result;
  if (max_likelihood <= 0.0) {
    result.weights.assign(k, 1.0 / k);
    result.degenerate = true;
    return result;
  }
  bool all_equal = true;
  for (double l : likelihoods)
    if (l != max_likelihood) all_equal = false;
  if (all_equal) {  // equal evidence: the posterior is the prior weights, exactly
    result.weights = weights.values();
    return result;
  }
  result.weights.resize(k);
  double total = 0.0;
  for (int j = 0; j < k; ++j) {
    result.weights[j] = weights[j] * (likelihoods[j] / max_likelihood);
    total += result.weights[j];
  }
  if (total <= 0.0) {  // only the zero-weight principals could explain the history
    result.weights.assign(k, 1.0 / k);
    result.degenerate = true;
    return result;
  }
  for (double& w : result.weights) w /= total;
  return result;
}

PosteriorResult principal_posterior(const ProblemSet& problems, const WeightVector& weights,
                                    const History& history) {
  problems.require_compatible();
  if (weights.size() != problems.size())
    throw std::invalid_argument("one weight per principal required");
  std::vector<double> likelihoods(problems.size());
  for (int j = 0; j < problems.size(); ++j)
    likelihoods[j] =
        causal_obs_probability(problems.principals[j], history.observations, history.actions);
  return posterior_from_likelihoods(weights, likelihoods);
}

}  // namespace mpp
