#pragma once

#include "mpp/mixture.hpp"
#include "mpp/pomdp.hpp"

namespace mpp {

/// Generator selector for simulation and exact diagnostics: a principal's
/// own model, or the weighted-coin compound model.
inline constexpr int kMixtureGenerator = -1;

/// Per-principal posterior weights after a history; the quantity that
/// multiplies each principal's continuation value in the Pareto recursion.
/// Identical to principal_posterior, re-exported under its diagnostic name.
PosteriorResult effective_weights(const ProblemSet& problems, const WeightVector& weights,
                                  const History& history);

struct Trajectory {
  Outcome outcome;
  int model_tag = 0;  // principal index whose model generated the run
  // effective_weights[i-1][j]: posterior after (o_<=i, a_<i). Empty when the
  // simulation ran without a problem-set context.
  std::vector<std::vector<double>> effective_weights;
  std::vector<bool> degenerate_steps;
  // One entry per principal; NaN when a state label has no counterpart in
  // that principal's space.
  std::vector<double> realized_utilities;
};

/// Samples complete runs from one POMDP's generative chain. The stream is
/// mt19937_64 seeded with structural_hash(pomdp) XOR seed; uniform doubles
/// take the top 53 bits of each output word, so runs are reproducible for a
/// fixed build of this library.
std::vector<Trajectory> simulate(const PrincipalPomdp& pomdp, const FullMemoryPolicy& policy,
                                 std::uint64_t seed, int count);

/// Samples runs under one principal's model (generator_model = j) or under
/// the weighted coin (generator_model = kMixtureGenerator), recording
/// per-step effective weights along the realized history.
std::vector<Trajectory> simulate(const ProblemSet& problems, const WeightVector& weights,
                                 int generator_model, const FullMemoryPolicy& policy,
                                 std::uint64_t seed, int count);

struct BetSettlingGroup {
  int model_tag = 0;
  int trajectories = 0;
  // mean[i-1][j]: sample mean effective weight of principal j at step i.
  std::vector<std::vector<double>> mean_effective_weights;
};

/// Sampled bet-settling summary: effective-weight paths grouped by the model
/// that actually generated each run.
struct BetSettlingReport {
  int generator_model = kMixtureGenerator;
  std::uint64_t seed = 0;
  int count = 0;
  std::vector<BetSettlingGroup> per_model;
  std::vector<std::vector<double>> overall_mean;  // [step-1][principal]
};

BetSettlingReport bet_settling_report(const ProblemSet& problems, const WeightVector& weights,
                                      const FullMemoryPolicy& policy, int generator_model,
                                      std::uint64_t seed, int count);

/// Exact per-step expectation of the effective weights under a generating
/// model, by closed-form summation over all histories (no sampling). Under
/// the compound model this reproduces the starting weights at every step:
/// the posterior is a martingale.
std::vector<std::vector<double>> exact_mean_effective_weights(const ProblemSet& problems,
                                                              const WeightVector& weights,
                                                              const FullMemoryPolicy& policy,
                                                              int generator_model);

}  // namespace mpp
