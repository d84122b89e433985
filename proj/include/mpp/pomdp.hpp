#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace mpp {

inline constexpr double kProbTolerance = 1e-9;
inline constexpr double kWeightTolerance = 1e-12;
inline constexpr double kTieTolerance = 1e-9;
inline constexpr std::uint64_t kDefaultPolicyTableCap = 1'000'000;
inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

/// Thrown when an instance exceeds a configured size cap.
struct SizeCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Per-step reward r(s_i, a_i, s_{i+1}) plus a terminal reward on s_{n+1}.
/// Total utility of a run is the sum of all step rewards and the terminal
/// term.
struct AdditiveUtility {
  std::vector<std::vector<std::vector<double>>> step;  // [s][a][s']
  std::vector<double> terminal;                        // [s]
};

struct SequenceLess {
  using is_transparent = void;
  bool operator()(std::span<const int> a, std::span<const int> b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

/// Explicit utility over full state sequences (s_1, ..., s_{n+1}); sequences
/// not listed take the default value.
struct SequenceTableUtility {
  double default_value = 0.0;
  std::map<std::vector<int>, double, SequenceLess> entries;
};

using UtilitySpec = std::variant<AdditiveUtility, SequenceTableUtility>;

/// One principal's world model and utility: a finite-horizon POMDP with
/// states, action-conditioned transitions, an observation kernel, a prior,
/// and a (not necessarily additive) utility over state sequences.
struct PrincipalPomdp {
  std::string name;
  std::vector<std::string> state_labels;
  std::vector<std::string> action_labels;
  std::vector<std::string> observation_labels;
  int horizon = 1;
  std::vector<double> prior;                                 // [s]
  std::vector<std::vector<std::vector<double>>> transition;  // [s][a][s']
  std::vector<std::vector<double>> observation;              // [s][o]
  UtilitySpec utility;

  int num_states() const { return static_cast<int>(state_labels.size()); }
  int num_actions() const { return static_cast<int>(action_labels.size()); }
  int num_observations() const { return static_cast<int>(observation_labels.size()); }

  /// Utility of a full run (n+1 states, n actions). Actions only matter for
  /// additive step rewards; sequence tables ignore them.
  double utility_of(std::span<const int> states, std::span<const int> actions) const;
};

/// Observation/action prefix (o_1..o_i, a_1..a_{i-1}) with i = step().
/// The empty history (no observations yet) is permitted where a
/// pre-observation prefix is meaningful (likelihoods, posteriors).
struct History {
  std::vector<int> observations;
  std::vector<int> actions;

  int step() const { return static_cast<int>(observations.size()); }
};

/// Number of histories of a given step: |O|^i * |A|^(i-1). Saturates at
/// UINT64_MAX instead of overflowing.
std::uint64_t history_count(int step, int num_observations, int num_actions);

/// Canonical dense index of a history among all histories of its step.
/// Digits are ordered o_1, a_1, o_2, a_2, ..., o_i with o_i fastest.
std::uint64_t history_index(const History& history, int num_observations, int num_actions);
History history_from_index(std::uint64_t index, int step, int num_observations,
                           int num_actions);

/// Total number of action-distribution entries a complete policy table
/// holds: sum over steps of histories(step) * |A|. Saturating.
std::uint64_t policy_table_entries(int horizon, int num_observations, int num_actions);

void check_policy_table_cap(int horizon, int num_observations, int num_actions,
                            std::uint64_t cap);

/// A complete per-timestep map from every history to a distribution over
/// actions, stored as explicit tables indexed by history_index.
struct FullMemoryPolicy {
  int horizon = 0;
  int num_observations = 0;
  int num_actions = 0;
  std::vector<std::vector<std::vector<double>>> steps;  // [i-1][hidx][a]

  static FullMemoryPolicy pure_constant(int horizon, int num_observations, int num_actions,
                                        int action,
                                        std::uint64_t cap = kDefaultPolicyTableCap);
  static FullMemoryPolicy uniform(int horizon, int num_observations, int num_actions,
                                  std::uint64_t cap = kDefaultPolicyTableCap);

  const std::vector<double>& distribution(const History& history) const;
  double prob(const History& history, int action) const;
  bool shape_matches(const PrincipalPomdp& pomdp) const;
};

/// Time-0 lottery over full-memory policies.
struct MixedPolicy {
  std::vector<double> coefficients;
  std::vector<FullMemoryPolicy> components;
};

/// A complete run: states s_1..s_{n+1}, observations o_1..o_n, actions
/// a_1..a_n.
struct Outcome {
  std::vector<int> states;
  std::vector<int> observations;
  std::vector<int> actions;
};

/// A collection of principals' POMDPs sharing actions, observations, and
/// horizon, so a single policy serves all of them.
struct ProblemSet {
  std::vector<PrincipalPomdp> principals;

  int size() const { return static_cast<int>(principals.size()); }
  int horizon() const;
  const std::vector<std::string>& action_labels() const;
  const std::vector<std::string>& observation_labels() const;
  bool is_compatible() const;
  void require_compatible() const;
};

/// Index of a label, or -1 if absent.
int index_of_label(const std::vector<std::string>& labels, const std::string& label);

/// Stable content hash of an instance; used to key reports and to derive
/// simulation seeds.
std::uint64_t structural_hash(const PrincipalPomdp& pomdp);
std::uint64_t structural_hash(const ProblemSet& problems);

}  // namespace mpp
