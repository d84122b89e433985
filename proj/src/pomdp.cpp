#include "mpp/pomdp.hpp"

#include <bit>
#include <limits>

#include "mpp/util.hpp"

namespace mpp {
namespace {

constexpr std::uint64_t kU64Max = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kU64Max / a) return kU64Max;
  return a * b;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  if (b > kU64Max - a) return kU64Max;
  return a + b;
}

std::uint64_t hash_double(double value, std::uint64_t seed) {
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(value);
  return fnv1a64_bytes(&bits, sizeof(bits), seed);
}

std::uint64_t hash_doubles(const std::vector<double>& values, std::uint64_t seed) {
  for (double v : values) seed = hash_double(v, seed);
  return seed;
}

std::uint64_t hash_labels(const std::vector<std::string>& labels, std::uint64_t seed) {
  for (const auto& label : labels) {
    seed = fnv1a64(label, seed);
    seed = fnv1a64("\x1f", seed);
  }
  return seed;
}

}  // namespace

double PrincipalPomdp::utility_of(std::span<const int> states,
                                  std::span<const int> actions) const {
  if (static_cast<int>(states.size()) != horizon + 1)
    throw std::invalid_argument("utility_of: state sequence must have horizon+1 entries");
  if (static_cast<int>(actions.size()) != horizon)
    throw std::invalid_argument("utility_of: action sequence must have horizon entries");
  if (const auto* additive = std::get_if<AdditiveUtility>(&utility)) {
    double total = 0.0;
    for (int t = 0; t < horizon; ++t)
      total += additive->step[states[t]][actions[t]][states[t + 1]];
    return total + additive->terminal[states[horizon]];
  }
  const auto& table = std::get<SequenceTableUtility>(utility);
  auto it = table.entries.find(states);
  return it == table.entries.end() ? table.default_value : it->second;
}

std::uint64_t history_count(int step, int num_observations, int num_actions) {
  std::uint64_t count = 1;
  for (int t = 1; t <= step; ++t) {
    count = saturating_mul(count, static_cast<std::uint64_t>(num_observations));
    if (t < step) count = saturating_mul(count, static_cast<std::uint64_t>(num_actions));
  }
  return count;
}

std::uint64_t history_index(const History& history, int num_observations, int num_actions) {
  const int step = history.step();
  if (static_cast<int>(history.actions.size()) != step - 1)
    throw std::invalid_argument("history_index: need one more observation than actions");
  std::uint64_t index = 0;
  for (int t = 0; t < step; ++t) {
    index = index * static_cast<std::uint64_t>(num_observations) +
            static_cast<std::uint64_t>(history.observations[t]);
    if (t < step - 1)
      index = index * static_cast<std::uint64_t>(num_actions) +
              static_cast<std::uint64_t>(history.actions[t]);
  }
  return index;
}

History history_from_index(std::uint64_t index, int step, int num_observations,
                           int num_actions) {
  History history;
  history.observations.resize(step);
  history.actions.resize(step > 0 ? step - 1 : 0);
  for (int t = step - 1; t >= 0; --t) {
    if (t < step - 1) {
      history.actions[t] = static_cast<int>(index % num_actions);
      index /= num_actions;
    }
    history.observations[t] = static_cast<int>(index % num_observations);
    index /= num_observations;
  }
  return history;
}

std::uint64_t policy_table_entries(int horizon, int num_observations, int num_actions) {
  std::uint64_t total = 0;
  for (int i = 1; i <= horizon; ++i) {
    total = saturating_add(
        total, saturating_mul(history_count(i, num_observations, num_actions),
                              static_cast<std::uint64_t>(num_actions)));
  }
  return total;
}

void check_policy_table_cap(int horizon, int num_observations, int num_actions,
                            std::uint64_t cap) {
  const std::uint64_t entries = policy_table_entries(horizon, num_observations, num_actions);
  if (entries > cap) {
    throw SizeCapError("policy table would need " + std::to_string(entries) +
                       " entries, exceeding the cap of " + std::to_string(cap));
  }
}

FullMemoryPolicy FullMemoryPolicy::pure_constant(int horizon, int num_observations,
                                                 int num_actions, int action,
                                                 std::uint64_t cap) {
  check_policy_table_cap(horizon, num_observations, num_actions, cap);
  if (action < 0 || action >= num_actions)
    throw std::invalid_argument("pure_constant: action index out of range");
  FullMemoryPolicy policy;
  policy.horizon = horizon;
  policy.num_observations = num_observations;
  policy.num_actions = num_actions;
  policy.steps.resize(horizon);
  for (int i = 1; i <= horizon; ++i) {
    std::vector<double> dist(num_actions, 0.0);
    dist[action] = 1.0;
    policy.steps[i - 1].assign(history_count(i, num_observations, num_actions), dist);
  }
  return policy;
}

FullMemoryPolicy FullMemoryPolicy::uniform(int horizon, int num_observations,
                                           int num_actions, std::uint64_t cap) {
  check_policy_table_cap(horizon, num_observations, num_actions, cap);
  FullMemoryPolicy policy;
  policy.horizon = horizon;
  policy.num_observations = num_observations;
  policy.num_actions = num_actions;
  policy.steps.resize(horizon);
  const std::vector<double> dist(num_actions, 1.0 / num_actions);
  for (int i = 1; i <= horizon; ++i)
    policy.steps[i - 1].assign(history_count(i, num_observations, num_actions), dist);
  return policy;
}

const std::vector<double>& FullMemoryPolicy::distribution(const History& history) const {
  const int step = history.step();
  if (step < 1 || step > horizon)
    throw std::invalid_argument("policy lookup: history step out of range");
  return steps[step - 1][history_index(history, num_observations, num_actions)];
}

double FullMemoryPolicy::prob(const History& history, int action) const {
  return distribution(history)[action];
}

bool FullMemoryPolicy::shape_matches(const PrincipalPomdp& pomdp) const {
  return horizon == pomdp.horizon && num_observations == pomdp.num_observations() &&
         num_actions == pomdp.num_actions();
}

int ProblemSet::horizon() const {
  require_compatible();
  return principals.front().horizon;
}

const std::vector<std::string>& ProblemSet::action_labels() const {
  require_compatible();
  return principals.front().action_labels;
}

const std::vector<std::string>& ProblemSet::observation_labels() const {
  require_compatible();
  return principals.front().observation_labels;
}

bool ProblemSet::is_compatible() const {
  if (principals.empty()) return false;
  const auto& first = principals.front();
  for (const auto& pomdp : principals) {
    if (pomdp.horizon != first.horizon || pomdp.action_labels != first.action_labels ||
        pomdp.observation_labels != first.observation_labels)
      return false;
  }
  return true;
}

void ProblemSet::require_compatible() const {
  if (principals.empty())
    throw std::invalid_argument("problem set has no principals");
  if (!is_compatible())
    throw std::invalid_argument(
        "incompatible POMDPs: principals must share actions, observations, and horizon");
}

int index_of_label(const std::vector<std::string>& labels, const std::string& label) {
  auto it = std::find(labels.begin(), labels.end(), label);
  return it == labels.end() ? -1 : static_cast<int>(it - labels.begin());
}

std::uint64_t structural_hash(const PrincipalPomdp& pomdp) {
  std::uint64_t hash = fnv1a64(pomdp.name);
  hash = hash_labels(pomdp.state_labels, hash);
  hash = hash_labels(pomdp.action_labels, hash);
  hash = hash_labels(pomdp.observation_labels, hash);
  hash = fnv1a64_bytes(&pomdp.horizon, sizeof(pomdp.horizon), hash);
  hash = hash_doubles(pomdp.prior, hash);
  for (const auto& row : pomdp.transition)
    for (const auto& dist : row) hash = hash_doubles(dist, hash);
  for (const auto& dist : pomdp.observation) hash = hash_doubles(dist, hash);
  if (const auto* additive = std::get_if<AdditiveUtility>(&pomdp.utility)) {
    hash = fnv1a64("additive", hash);
    for (const auto& row : additive->step)
      for (const auto& dist : row) hash = hash_doubles(dist, hash);
    hash = hash_doubles(additive->terminal, hash);
  } else {
    const auto& table = std::get<SequenceTableUtility>(pomdp.utility);
    hash = fnv1a64("table", hash);
    hash = hash_double(table.default_value, hash);
    for (const auto& [sequence, value] : table.entries) {
      for (int s : sequence) hash = fnv1a64_bytes(&s, sizeof(s), hash);
      hash = hash_double(value, hash);
    }
  }
  return hash;
}

std::uint64_t structural_hash(const ProblemSet& problems) {
  std::uint64_t hash = fnv1a64("problem-set");
  for (const auto& pomdp : problems.principals) {
    const std::uint64_t h = structural_hash(pomdp);
    hash = fnv1a64_bytes(&h, sizeof(h), hash);
  }
  return hash;
}

}  // namespace mpp
