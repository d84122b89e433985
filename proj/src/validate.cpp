#include "mpp/validate.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

namespace mpp {
namespace {

std::string short_num(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return std::string(buf);
}

void check_labels(const std::vector<std::string>& labels, const std::string& what,
                  std::vector<std::string>& out) {
  if (labels.empty()) {
    out.push_back(what + " list is empty");
    return;
  }
  std::set<std::string> seen;
  for (const auto& label : labels) {
    if (label.empty()) out.push_back(what + " contains an empty label");
    if (label.find(',') != std::string::npos || label.find('|') != std::string::npos)
      out.push_back(what + " label '" + label + "' contains a reserved character (',' or '|')");
    if (!seen.insert(label).second) out.push_back("duplicate " + what + " label '" + label + "'");
  }
}

// Reports negatives and a bad sum for one probability row.
void check_row(std::span<const double> row, std::size_t expected_size,
               const std::string& what, std::vector<std::string>& out) {
  if (row.size() != expected_size) {
    out.push_back(what + " has " + std::to_string(row.size()) + " entries, expected " +
                  std::to_string(expected_size));
    return;
  }
  double sum = 0.0;
  for (double p : row) {
    if (!std::isfinite(p)) {
      out.push_back(what + " has non-finite entry");
      return;
    }
    if (p < 0.0) out.push_back(what + " has negative probability " + short_num(p));
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbTolerance)
    out.push_back(what + " sums to " + short_num(sum));
}

void check_utility(const PrincipalPomdp& pomdp, std::vector<std::string>& out) {
  const std::size_t ns = pomdp.state_labels.size();
  const std::size_t na = pomdp.action_labels.size();
  if (const auto* additive = std::get_if<AdditiveUtility>(&pomdp.utility)) {
    if (additive->step.size() != ns || additive->terminal.size() != ns) {
      out.push_back("additive utility tables do not match the state count");
      return;
    }
    for (const auto& by_action : additive->step) {
      if (by_action.size() != na) {
        out.push_back("additive utility step table does not match the action count");
        return;
      }
      for (const auto& row : by_action) {
        if (row.size() != ns) {
          out.push_back("additive utility step row does not match the state count");
          return;
        }
        for (double v : row)
          if (!std::isfinite(v)) out.push_back("additive utility has non-finite step value");
      }
    }
    for (double v : additive->terminal)
      if (!std::isfinite(v)) out.push_back("additive utility has non-finite terminal value");
    return;
  }
  const auto& table = std::get<SequenceTableUtility>(pomdp.utility);
  if (!std::isfinite(table.default_value))
    out.push_back("utility table default value is non-finite");
  for (const auto& [sequence, value] : table.entries) {
    if (static_cast<int>(sequence.size()) != pomdp.horizon + 1)
      out.push_back("utility table key has length " + std::to_string(sequence.size()) +
                    ", expected " + std::to_string(pomdp.horizon + 1));
    for (int s : sequence)
      if (s < 0 || s >= static_cast<int>(ns))
        out.push_back("utility table key references invalid state index " + std::to_string(s));
    if (!std::isfinite(value)) out.push_back("utility table has non-finite value");
  }
}

}  // namespace

std::string ValidationReport::joined() const {
  std::string result;
  for (const auto& v : violations) {
    if (!result.empty()) result += "; ";
    result += v;
  }
  return result;
}

bool is_distribution(std::span<const double> row, double tolerance) {
  double sum = 0.0;
  for (double p : row) {
    if (!(p >= 0.0)) return false;
    sum += p;
  }
  return std::abs(sum - 1.0) <= tolerance;
}

ValidationReport validate(const PrincipalPomdp& pomdp) {
  ValidationReport report;
  auto& out = report.violations;

  check_labels(pomdp.state_labels, "state", out);
  check_labels(pomdp.action_labels, "action", out);
  check_labels(pomdp.observation_labels, "observation", out);
  if (pomdp.horizon < 1)
    out.push_back("horizon must be >= 1 (got " + std::to_string(pomdp.horizon) + ")");
  if (!out.empty()) return report;  // shapes below assume sane label lists

  const std::size_t ns = pomdp.state_labels.size();
  const std::size_t na = pomdp.action_labels.size();
  const std::size_t no = pomdp.observation_labels.size();

  check_row(pomdp.prior, ns, "prior", out);

  if (pomdp.transition.size() != ns) {
    out.push_back("transition table has " + std::to_string(pomdp.transition.size()) +
                  " state rows, expected " + std::to_string(ns));
  } else {
    for (std::size_t s = 0; s < ns; ++s) {
      if (pomdp.transition[s].size() != na) {
        out.push_back("transition rows for state '" + pomdp.state_labels[s] +
                      "' do not cover every action");
        continue;
      }
      for (std::size_t a = 0; a < na; ++a)
        check_row(pomdp.transition[s][a], ns,
                  "transition row (" + pomdp.state_labels[s] + ", " +
                      pomdp.action_labels[a] + ")",
                  out);
    }
  }

  if (pomdp.observation.size() != ns) {
    out.push_back("observation table has " + std::to_string(pomdp.observation.size()) +
                  " rows, expected " + std::to_string(ns));
  } else {
    for (std::size_t s = 0; s < ns; ++s)
      check_row(pomdp.observation[s], no,
                "observation row (" + pomdp.state_labels[s] + ")", out);
  }

  check_utility(pomdp, out);
  return report;
}

ValidationReport validate(const ProblemSet& problems) {
  ValidationReport report;
  if (problems.principals.empty()) {
    report.violations.push_back("problem set has no principals");
    return report;
  }
  if (!problems.is_compatible())
    report.violations.push_back(
        "incompatible POMDPs: principals must share actions, observations, and horizon");
  for (std::size_t j = 0; j < problems.principals.size(); ++j) {
    const auto sub = validate(problems.principals[j]);
    for (const auto& v : sub.violations)
      report.violations.push_back("principal " + std::to_string(j + 1) + ": " + v);
  }
  return report;
}

}  // namespace mpp
