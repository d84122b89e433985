#include "mpp/analysis.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "mpp/kernels.hpp"
#include "mpp/util.hpp"

namespace mpp {
namespace {

double uniform53(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int sample_categorical(std::mt19937_64& rng, std::span<const double> probs) {
  const double u = uniform53(rng);
  double cumulative = 0.0;
  for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
    cumulative += probs[i];
    if (u < cumulative) return i;
  }
  return static_cast<int>(probs.size()) - 1;
}

Outcome sample_outcome(std::mt19937_64& rng, const PrincipalPomdp& pomdp,
                       const FullMemoryPolicy& policy) {
  const int n = pomdp.horizon;
  Outcome outcome;
  outcome.states.push_back(sample_categorical(rng, pomdp.prior));
  History history;
  for (int t = 0; t < n; ++t) {
    const int s = outcome.states.back();
    const int o = sample_categorical(rng, pomdp.observation[s]);
    outcome.observations.push_back(o);
    history.observations.push_back(o);
    const int a = sample_categorical(rng, policy.distribution(history));
    outcome.actions.push_back(a);
    history.actions.push_back(a);
    outcome.states.push_back(sample_categorical(rng, pomdp.transition[s][a]));
  }
  return outcome;
}

// Utility each principal assigns to a run recorded in `source` labels; NaN
// when some state has no counterpart in the principal's space.
std::vector<double> realized_utilities(const ProblemSet& problems,
                                       const PrincipalPomdp& source, const Outcome& outcome) {
  std::vector<double> result(problems.size(),
                            std::numeric_limits<double>::quiet_NaN());
  for (int j = 0; j < problems.size(); ++j) {
    const auto& pomdp = problems.principals[j];
    std::vector<int> mapped(outcome.states.size());
    bool ok = true;
    for (std::size_t t = 0; t < outcome.states.size() && ok; ++t) {
      mapped[t] = index_of_label(pomdp.state_labels, source.state_labels[outcome.states[t]]);
      ok = mapped[t] >= 0;
    }
    if (ok) result[j] = pomdp.utility_of(mapped, outcome.actions);
  }
  return result;
}

}  // namespace

PosteriorResult effective_weights(const ProblemSet& problems, const WeightVector& weights,
                                  const History& history) {
  return principal_posterior(problems, weights, history);
}

std::vector<Trajectory> simulate(const PrincipalPomdp& pomdp, const FullMemoryPolicy& policy,
                                 std::uint64_t seed, int count) {
  if (!policy.shape_matches(pomdp))
    throw std::invalid_argument("policy is incompatible with the POMDP");
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  std::mt19937_64 rng(structural_hash(pomdp) ^ seed);
  std::vector<Trajectory> trajectories(count);
  for (auto& trajectory : trajectories) {
    trajectory.outcome = sample_outcome(rng, pomdp, policy);
    trajectory.realized_utilities = {
        pomdp.utility_of(trajectory.outcome.states, trajectory.outcome.actions)};
  }
  return trajectories;
}

std::vector<Trajectory> simulate(const ProblemSet& problems, const WeightVector& weights,
                                 int generator_model, const FullMemoryPolicy& policy,
                                 std::uint64_t seed, int count) {
  problems.require_compatible();
  if (weights.size() != problems.size())
    throw std::invalid_argument("one weight per principal required");
  if (generator_model != kMixtureGenerator &&
      (generator_model < 0 || generator_model >= problems.size()))
    throw std::invalid_argument("generator_model must be kMixtureGenerator or a principal index");
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  if (!policy.shape_matches(problems.principals.front()))
    throw std::invalid_argument("policy is incompatible with the problem set");

  std::mt19937_64 rng(structural_hash(problems) ^ seed);
  std::vector<Trajectory> trajectories(count);
  for (auto& trajectory : trajectories) {
    const int tag = generator_model == kMixtureGenerator
                        ? sample_categorical(rng, weights.values())
                        : generator_model;
    const auto& pomdp = problems.principals[tag];
    trajectory.model_tag = tag;
    trajectory.outcome = sample_outcome(rng, pomdp, policy);
    trajectory.realized_utilities = realized_utilities(problems, pomdp, trajectory.outcome);

    History history;
    for (int t = 0; t < pomdp.horizon; ++t) {
      history.observations.push_back(trajectory.outcome.observations[t]);
      const PosteriorResult posterior = principal_posterior(problems, weights, history);
      trajectory.effective_weights.push_back(posterior.weights);
      trajectory.degenerate_steps.push_back(posterior.degenerate);
      history.actions.push_back(trajectory.outcome.actions[t]);
    }
  }
  return trajectories;
}

BetSettlingReport bet_settling_report(const ProblemSet& problems, const WeightVector& weights,
                                      const FullMemoryPolicy& policy, int generator_model,
                                      std::uint64_t seed, int count) {
  const auto trajectories = simulate(problems, weights, generator_model, policy, seed, count);
  const int n = problems.horizon();
  const int k = problems.size();

  BetSettlingReport report;
  report.generator_model = generator_model;
  report.seed = seed;
  report.count = count;
  report.overall_mean.assign(n, std::vector<double>(k, 0.0));

  std::map<int, BetSettlingGroup> groups;
  for (const auto& trajectory : trajectories) {
    auto [it, inserted] = groups.try_emplace(trajectory.model_tag);
    if (inserted) {
      it->second.model_tag = trajectory.model_tag;
      it->second.mean_effective_weights.assign(n, std::vector<double>(k, 0.0));
    }
    ++it->second.trajectories;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < k; ++j) {
        it->second.mean_effective_weights[i][j] += trajectory.effective_weights[i][j];
        report.overall_mean[i][j] += trajectory.effective_weights[i][j] / count;
      }
    }
  }
  for (auto& [tag, group] : groups) {
    for (auto& row : group.mean_effective_weights)
      for (double& value : row) value /= group.trajectories;
    report.per_model.push_back(std::move(group));
  }
  return report;
}

std::vector<std::vector<double>> exact_mean_effective_weights(const ProblemSet& problems,
                                                              const WeightVector& weights,
                                                              const FullMemoryPolicy& policy,
                                                              int generator_model) {
  problems.require_compatible();
  const int n = problems.horizon();
  const int no = static_cast<int>(problems.observation_labels().size());
  const int na = static_cast<int>(problems.action_labels().size());
  const int k = problems.size();
  if (weights.size() != k) throw std::invalid_argument("one weight per principal required");
  if (generator_model != kMixtureGenerator && (generator_model < 0 || generator_model >= k))
    throw std::invalid_argument("generator_model must be kMixtureGenerator or a principal index");

  std::vector<std::vector<double>> means(n, std::vector<double>(k, 0.0));
  std::vector<double> likelihoods(k);
  for (int i = 1; i <= n; ++i) {
    const std::uint64_t count = history_count(i, no, na);
    for (std::uint64_t hidx = 0; hidx < count; ++hidx) {
      const History history = history_from_index(hidx, i, no, na);

      // Probability the generating model walks this history under the policy.
      double policy_factor = 1.0;
      History prefix;
      for (int t = 0; t < i - 1 && policy_factor != 0.0; ++t) {
        prefix.observations.push_back(history.observations[t]);
        policy_factor *= policy.prob(prefix, history.actions[t]);
        prefix.actions.push_back(history.actions[t]);
      }
      if (policy_factor == 0.0) continue;

      for (int j = 0; j < k; ++j)
        likelihoods[j] = causal_obs_probability(problems.principals[j], history.observations,
                                                history.actions);
      double generation_prob;
      if (generator_model == kMixtureGenerator) {
        generation_prob = 0.0;
        for (int j = 0; j < k; ++j) generation_prob += weights[j] * likelihoods[j];
      } else {
        generation_prob = likelihoods[generator_model];
      }
      if (generation_prob == 0.0) continue;
      generation_prob *= policy_factor;

      const PosteriorResult posterior = posterior_from_likelihoods(weights, likelihoods);
      for (int j = 0; j < k; ++j) means[i - 1][j] += generation_prob * posterior.weights[j];
    }
  }
  return means;
}

}  // namespace mpp
