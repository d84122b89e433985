#include "mpp/solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "mpp/kernels.hpp"
#include "mpp/util.hpp"

namespace mpp {
namespace {

struct ScoredChoice {
  std::vector<double> scores;  // objective value per pure action
  int chosen = -1;             // -1: take the strict-first argmax of scores
};

// Shared backward pass. objective(history, per-principal continuation values)
// scores every pure action; unless it names a choice, the strict-first argmax
// wins, so ties and all-zero rows resolve to the earliest label.
template <typename Objective>
SolveResult solve_backward(const ProblemSet& problems, const WeightVector& weights,
                           std::uint64_t cap, Objective&& objective) {
  problems.require_compatible();
  const int n = problems.horizon();
  const int no = static_cast<int>(problems.observation_labels().size());
  const int na = static_cast<int>(problems.action_labels().size());
  const int k = problems.size();

  SolveResult result{FullMemoryPolicy::pure_constant(n, no, na, 0, cap),
                     {},
                     weights,
                     {}};
  result.history_values.resize(n);

  std::vector<std::vector<double>> per_principal(k);
  for (int i = n; i >= 1; --i) {
    const std::uint64_t count = history_count(i, no, na);
    result.history_values[i - 1].resize(count);
    for (std::uint64_t hidx = 0; hidx < count; ++hidx) {
      const History history = history_from_index(hidx, i, no, na);
      for (int j = 0; j < k; ++j)
        per_principal[j] = continuation_values(problems.principals[j], history, result.policy);
      ScoredChoice choice = objective(history, per_principal);
      const int best = choice.chosen >= 0 ? choice.chosen : argmax_first(choice.scores);
      auto& dist = result.policy.steps[i - 1][hidx];
      std::fill(dist.begin(), dist.end(), 0.0);
      dist[best] = 1.0;
      result.history_values[i - 1][hidx] = std::move(choice.scores);
    }
  }

  result.payoff.resize(k);
  for (int j = 0; j < k; ++j)
    result.payoff[j] = evaluate(problems.principals[j], result.policy);
  return result;
}

}  // namespace

SolveResult bellman_solve(const PrincipalPomdp& pomdp, std::uint64_t cap) {
  ProblemSet single{{pomdp}};
  return pareto_solve(single, WeightVector::uniform(1), cap);
}

SolveResult pareto_solve(const ProblemSet& problems, const WeightVector& weights,
                         std::uint64_t cap) {
  if (weights.size() != problems.size())
    throw std::invalid_argument("one weight per principal required");
  const int na = static_cast<int>(problems.action_labels().size());
  return solve_backward(
      problems, weights, cap,
      [&](const History&, const std::vector<std::vector<double>>& per_principal) {
        ScoredChoice choice{std::vector<double>(na, 0.0), -1};
        for (int j = 0; j < weights.size(); ++j)
          for (int a = 0; a < na; ++a) choice.scores[a] += weights[j] * per_principal[j][a];
        return choice;
      });
}

std::vector<FrontierPoint> frontier_sweep(const ProblemSet& problems, int grid_size,
                                          std::uint64_t cap) {
  problems.require_compatible();
  if (problems.size() != 2)
    throw std::invalid_argument("frontier_sweep requires exactly two principals");
  if (grid_size < 2) throw std::invalid_argument("frontier_sweep requires grid_size >= 2");

  constexpr double kDedupeTolerance = 1e-7;
  std::vector<FrontierPoint> points;
  for (int g = 0; g < grid_size; ++g) {
    const double w1 = static_cast<double>(g) / (grid_size - 1);
    const WeightVector weights(std::vector<double>{w1, 1.0 - w1});
    SolveResult solved = pareto_solve(problems, weights, cap);
    const bool duplicate =
        std::any_of(points.begin(), points.end(), [&](const FrontierPoint& p) {
          return std::abs(p.payoff[0] - solved.payoff[0]) < kDedupeTolerance &&
                 std::abs(p.payoff[1] - solved.payoff[1]) < kDedupeTolerance;
        });
    if (!duplicate) {
      points.push_back(FrontierPoint{weights, solved.payoff, std::move(solved.policy),
                                     ""});
      points.back().policy_id = policy_hash(points.back().policy);
    }
  }

  // Drop points some other sweep point dominates.
  auto dominates = [](const std::vector<double>& a, const std::vector<double>& b) {
    bool not_worse = a[0] >= b[0] - kTieTolerance && a[1] >= b[1] - kTieTolerance;
    bool better = a[0] > b[0] + kTieTolerance || a[1] > b[1] + kTieTolerance;
    return not_worse && better;
  };
  std::vector<bool> dominated(points.size(), false);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < points.size(); ++j)
      if (j != i && dominates(points[j].payoff, points[i].payoff)) dominated[i] = true;
  std::vector<FrontierPoint> kept;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (!dominated[i]) kept.push_back(std::move(points[i]));
  std::sort(kept.begin(), kept.end(), [](const FrontierPoint& a, const FrontierPoint& b) {
    return a.weights[0] < b.weights[0];
  });
  return kept;
}

SolveResult naive_solve(const ProblemSet& problems, double r, const SelectionRule& selection,
                        std::uint64_t cap) {
  problems.require_compatible();
  if (problems.size() != 2)
    throw std::invalid_argument("naive_solve requires exactly two principals");
  if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("r must lie in [0, 1]");

  const int na = static_cast<int>(problems.action_labels().size());
  const WeightVector fixed(std::vector<double>{r, 1.0 - r});
  return solve_backward(
      problems, fixed, cap,
      [&](const History& history, const std::vector<std::vector<double>>& per_principal) {
        ScoredChoice choice{std::vector<double>(na, 0.0), -1};
        const double coeff[2] = {r, 1.0 - r};
        for (int j = 0; j < 2; ++j) {
          const double likelihood = causal_obs_probability(
              problems.principals[j], history.observations, history.actions);
          if (likelihood <= 0.0) continue;
          for (int a = 0; a < na; ++a)
            choice.scores[a] += coeff[j] * (per_principal[j][a] / likelihood);
        }
        // Selection happens among all actions attaining the maximum (within
        // tolerance): the per-observation override when it is maximal, else
        // the earliest maximal action.
        const std::vector<int> ties = argmax_set(choice.scores, kTieTolerance);
        choice.chosen = ties.front();
        const auto it = selection.per_observation_action.find(history.observations.back());
        if (it != selection.per_observation_action.end() &&
            std::find(ties.begin(), ties.end(), it->second) != ties.end())
          choice.chosen = it->second;
        return choice;
      });
}

std::string policy_hash(const FullMemoryPolicy& policy) {
  std::uint64_t hash = fnv1a64("policy");
  const int dims[3] = {policy.horizon, policy.num_observations, policy.num_actions};
  hash = fnv1a64_bytes(dims, sizeof(dims), hash);
  for (const auto& step : policy.steps) {
    for (const auto& dist : step) {
      for (double p : dist) {
        const std::uint64_t bits = std::bit_cast<std::uint64_t>(p);
        hash = fnv1a64_bytes(&bits, sizeof(bits), hash);
      }
    }
  }
  return to_hex(hash);
}

}  // namespace mpp
