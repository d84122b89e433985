#include "mpp/json_io.hpp"

#include <fstream>
#include <sstream>

#include "mpp/util.hpp"
#include "mpp/validate.hpp"

namespace mpp {

using nlohmann::json;

namespace {

int require_label(const std::vector<std::string>& labels, const std::string& label,
                  const std::string& what) {
  const int index = index_of_label(labels, label);
  if (index < 0)
    throw std::invalid_argument("unknown " + what + " label '" + label + "'");
  return index;
}

std::vector<std::string> parse_label_list(const json& doc, const std::string& key) {
  if (!doc.contains(key) || !doc[key].is_array())
    throw std::invalid_argument("problem file: missing array '" + key + "'");
  std::vector<std::string> labels;
  for (const auto& item : doc[key]) {
    if (!item.is_string())
      throw std::invalid_argument("problem file: '" + key + "' entries must be strings");
    labels.push_back(item.get<std::string>());
  }
  return labels;
}

std::vector<std::string> split(const std::string& text, char separator) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == separator) {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  return parts;
}

json distribution_to_json(std::span<const double> row, const std::vector<std::string>& labels) {
  json object = json::object();
  for (std::size_t i = 0; i < row.size(); ++i) object[labels[i]] = row[i];
  return object;
}

std::vector<double> distribution_from_json(const json& object,
                                           const std::vector<std::string>& labels,
                                           const std::string& what) {
  if (!object.is_object())
    throw std::invalid_argument("problem file: " + what + " must be an object");
  std::vector<double> row(labels.size(), 0.0);
  for (const auto& [label, value] : object.items()) {
    const int index = require_label(labels, label, what);
    if (!value.is_number())
      throw std::invalid_argument("problem file: " + what + " entries must be numbers");
    row[index] = value.get<double>();
  }
  return row;
}

json utility_to_json(const PrincipalPomdp& pomdp) {
  json object = json::object();
  if (const auto* additive = std::get_if<AdditiveUtility>(&pomdp.utility)) {
    object["type"] = "additive";
    json step = json::object();
    for (int s = 0; s < pomdp.num_states(); ++s)
      for (int a = 0; a < pomdp.num_actions(); ++a)
        for (int s2 = 0; s2 < pomdp.num_states(); ++s2) {
          const double value = additive->step[s][a][s2];
          if (value != 0.0)
            step[pomdp.state_labels[s] + "|" + pomdp.action_labels[a] + "|" +
                 pomdp.state_labels[s2]] = value;
        }
    object["step"] = std::move(step);
    json terminal = json::object();
    for (int s = 0; s < pomdp.num_states(); ++s)
      terminal[pomdp.state_labels[s]] = additive->terminal[s];
    object["terminal"] = std::move(terminal);
    return object;
  }
  const auto& table = std::get<SequenceTableUtility>(pomdp.utility);
  object["type"] = "table";
  object["default"] = table.default_value;
  json entries = json::array();
  for (const auto& [sequence, value] : table.entries) {
    json labels = json::array();
    for (int s : sequence) labels.push_back(pomdp.state_labels[s]);
    entries.push_back(json{{"sequence", std::move(labels)}, {"value", value}});
  }
  object["entries"] = std::move(entries);
  return object;
}

UtilitySpec utility_from_json(const json& object, const PrincipalPomdp& pomdp) {
  if (!object.is_object() || !object.contains("type"))
    throw std::invalid_argument("problem file: utility must be an object with a 'type'");
  const std::string type = object["type"].get<std::string>();
  const int ns = pomdp.num_states();
  const int na = pomdp.num_actions();
  if (type == "additive") {
    AdditiveUtility utility;
    utility.step.assign(ns, std::vector<std::vector<double>>(na, std::vector<double>(ns, 0.0)));
    utility.terminal.assign(ns, 0.0);
    if (object.contains("step")) {
      for (const auto& [key, value] : object["step"].items()) {
        const auto parts = split(key, '|');
        if (parts.size() != 3)
          throw std::invalid_argument("problem file: utility step key '" + key +
                                      "' must be 'state|action|state'");
        const int s = require_label(pomdp.state_labels, parts[0], "state");
        const int a = require_label(pomdp.action_labels, parts[1], "action");
        const int s2 = require_label(pomdp.state_labels, parts[2], "state");
        utility.step[s][a][s2] = value.get<double>();
      }
    }
    if (object.contains("terminal")) {
      for (const auto& [label, value] : object["terminal"].items())
        utility.terminal[require_label(pomdp.state_labels, label, "state")] =
            value.get<double>();
    }
    return utility;
  }
  if (type == "table") {
    SequenceTableUtility utility;
    if (object.contains("default")) utility.default_value = object["default"].get<double>();
    if (object.contains("entries")) {
      for (const auto& entry : object["entries"]) {
        if (!entry.contains("sequence") || !entry.contains("value"))
          throw std::invalid_argument(
              "problem file: utility table entries need 'sequence' and 'value'");
        std::vector<int> sequence;
        for (const auto& label : entry["sequence"])
          sequence.push_back(
              require_label(pomdp.state_labels, label.get<std::string>(), "state"));
        const double value = entry["value"].get<double>();
        if (!utility.entries.emplace(std::move(sequence), value).second)
          throw std::invalid_argument("problem file: duplicate utility table sequence");
      }
    }
    return utility;
  }
  throw std::invalid_argument("problem file: unknown utility type '" + type + "'");
}

}  // namespace

json problem_to_json(const ProblemSet& problems) {
  problems.require_compatible();
  json doc;
  doc["horizon"] = problems.horizon();
  doc["actions"] = problems.action_labels();
  doc["observations"] = problems.observation_labels();
  json principals = json::array();
  for (const auto& pomdp : problems.principals) {
    json entry;
    entry["name"] = pomdp.name;
    entry["states"] = pomdp.state_labels;
    entry["prior"] = distribution_to_json(pomdp.prior, pomdp.state_labels);
    json transition = json::object();
    for (int s = 0; s < pomdp.num_states(); ++s)
      for (int a = 0; a < pomdp.num_actions(); ++a)
        transition[pomdp.state_labels[s] + "|" + pomdp.action_labels[a]] =
            distribution_to_json(pomdp.transition[s][a], pomdp.state_labels);
    entry["transition"] = std::move(transition);
    json observation = json::object();
    for (int s = 0; s < pomdp.num_states(); ++s)
      observation[pomdp.state_labels[s]] =
          distribution_to_json(pomdp.observation[s], pomdp.observation_labels);
    entry["observation"] = std::move(observation);
    entry["utility"] = utility_to_json(pomdp);
    principals.push_back(std::move(entry));
  }
  doc["principals"] = std::move(principals);
  return doc;
}

ProblemSet problem_from_json(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("problem file: root must be an object");
  if (!doc.contains("horizon") || !doc["horizon"].is_number_integer())
    throw std::invalid_argument("problem file: missing integer 'horizon'");
  const int horizon = doc["horizon"].get<int>();
  const auto actions = parse_label_list(doc, "actions");
  const auto observations = parse_label_list(doc, "observations");
  if (!doc.contains("principals") || !doc["principals"].is_array() ||
      doc["principals"].empty())
    throw std::invalid_argument("problem file: missing non-empty array 'principals'");

  ProblemSet problems;
  int index = 0;
  for (const auto& entry : doc["principals"]) {
    ++index;
    PrincipalPomdp pomdp;
    pomdp.name = entry.contains("name") ? entry["name"].get<std::string>()
                                        : "principal" + std::to_string(index);
    pomdp.horizon = horizon;
    pomdp.action_labels = actions;
    pomdp.observation_labels = observations;
    pomdp.state_labels = parse_label_list(entry, "states");
    const int ns = pomdp.num_states();
    const int na = pomdp.num_actions();

    pomdp.prior = entry.contains("prior")
                      ? distribution_from_json(entry["prior"], pomdp.state_labels, "state")
                      : std::vector<double>(ns, 0.0);

    pomdp.transition.assign(ns,
                            std::vector<std::vector<double>>(na, std::vector<double>(ns, 0.0)));
    if (entry.contains("transition")) {
      for (const auto& [key, row] : entry["transition"].items()) {
        const auto parts = split(key, '|');
        if (parts.size() != 2)
          throw std::invalid_argument("problem file: transition key '" + key +
                                      "' must be 'state|action'");
        const int s = require_label(pomdp.state_labels, parts[0], "state");
        const int a = require_label(pomdp.action_labels, parts[1], "action");
        pomdp.transition[s][a] = distribution_from_json(row, pomdp.state_labels, "state");
      }
    }

    pomdp.observation.assign(ns, std::vector<double>(pomdp.num_observations(), 0.0));
    if (entry.contains("observation")) {
      for (const auto& [label, row] : entry["observation"].items()) {
        const int s = require_label(pomdp.state_labels, label, "state");
        pomdp.observation[s] =
            distribution_from_json(row, pomdp.observation_labels, "observation");
      }
    }

    pomdp.utility = entry.contains("utility")
                        ? utility_from_json(entry["utility"], pomdp)
                        : UtilitySpec(AdditiveUtility{
                              std::vector<std::vector<std::vector<double>>>(
                                  ns, std::vector<std::vector<double>>(
                                          na, std::vector<double>(ns, 0.0))),
                              std::vector<double>(ns, 0.0)});
    problems.principals.push_back(std::move(pomdp));
  }
  return problems;
}

ProblemSet load_problem(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::parse_error& error) {
    throw std::invalid_argument("problem file '" + path + "': " + error.what());
  }
  return problem_from_json(doc);
}

void save_problem(const ProblemSet& problems, const std::string& path) {
  write_text_file(path, problem_to_json(problems).dump(2) + "\n");
}

std::string instance_hash_hex(const ProblemSet& problems) {
  return to_hex(structural_hash(problems));
}

namespace {

std::string history_key(const History& history,
                        const std::vector<std::string>& observation_labels,
                        const std::vector<std::string>& action_labels) {
  std::string key;
  for (int t = 0; t < history.step(); ++t) {
    if (t > 0) key += "," + action_labels[history.actions[t - 1]] + ",";
    key += observation_labels[history.observations[t]];
  }
  return key;
}

}  // namespace

json policy_to_json(const FullMemoryPolicy& policy,
                    const std::vector<std::string>& observation_labels,
                    const std::vector<std::string>& action_labels) {
  json doc = json::object();
  for (int i = 1; i <= policy.horizon; ++i) {
    const std::uint64_t count =
        history_count(i, policy.num_observations, policy.num_actions);
    for (std::uint64_t hidx = 0; hidx < count; ++hidx) {
      const History history =
          history_from_index(hidx, i, policy.num_observations, policy.num_actions);
      doc[history_key(history, observation_labels, action_labels)] = distribution_to_json(
          policy.steps[i - 1][hidx], action_labels);
    }
  }
  return doc;
}

FullMemoryPolicy policy_from_json(const json& doc,
                                  const std::vector<std::string>& observation_labels,
                                  const std::vector<std::string>& action_labels, int horizon,
                                  std::uint64_t cap) {
  if (!doc.is_object()) throw std::invalid_argument("policy file: root must be an object");
  const int no = static_cast<int>(observation_labels.size());
  const int na = static_cast<int>(action_labels.size());
  check_policy_table_cap(horizon, no, na, cap);

  FullMemoryPolicy policy;
  policy.horizon = horizon;
  policy.num_observations = no;
  policy.num_actions = na;
  policy.steps.resize(horizon);
  std::vector<std::vector<bool>> seen(horizon);
  for (int i = 1; i <= horizon; ++i) {
    const std::uint64_t count = history_count(i, no, na);
    policy.steps[i - 1].assign(count, std::vector<double>(na, 0.0));
    seen[i - 1].assign(count, false);
  }

  for (const auto& [key, row] : doc.items()) {
    const auto parts = split(key, ',');
    if (parts.size() % 2 == 0)
      throw std::invalid_argument("policy file: malformed history key '" + key + "'");
    History history;
    for (std::size_t t = 0; t < parts.size(); ++t) {
      if (t % 2 == 0)
        history.observations.push_back(
            require_label(observation_labels, parts[t], "observation"));
      else
        history.actions.push_back(require_label(action_labels, parts[t], "action"));
    }
    if (history.step() > horizon)
      throw std::invalid_argument("policy file: history key '" + key +
                                  "' is longer than the horizon");
    std::vector<double> dist(na, 0.0);
    for (const auto& [label, value] : row.items())
      dist[require_label(action_labels, label, "action")] = value.get<double>();
    if (!is_distribution(dist))
      throw std::invalid_argument("policy file: distribution for '" + key +
                                  "' does not sum to 1 or has negative entries");
    const std::uint64_t hidx = history_index(history, no, na);
    policy.steps[history.step() - 1][hidx] = std::move(dist);
    seen[history.step() - 1][hidx] = true;
  }

  for (int i = 1; i <= horizon; ++i) {
    const std::uint64_t count = history_count(i, no, na);
    for (std::uint64_t hidx = 0; hidx < count; ++hidx) {
      if (!seen[i - 1][hidx]) {
        const History history = history_from_index(hidx, i, no, na);
        throw std::invalid_argument("policy file: missing history '" +
                                    history_key(history, observation_labels, action_labels) +
                                    "'");
      }
    }
  }
  return policy;
}

void save_policy(const FullMemoryPolicy& policy, const ProblemSet& problems,
                 const std::string& path) {
  write_text_file(
      path,
      policy_to_json(policy, problems.observation_labels(), problems.action_labels()).dump(2) +
          "\n");
}

FullMemoryPolicy load_policy(const std::string& path, const ProblemSet& problems,
                             std::uint64_t cap) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::parse_error& error) {
    throw std::invalid_argument("policy file '" + path + "': " + error.what());
  }
  return policy_from_json(doc, problems.observation_labels(), problems.action_labels(),
                          problems.horizon(), cap);
}

std::string frontier_csv(const std::vector<FrontierPoint>& points) {
  std::string csv = "w1,w2,payoff1,payoff2,policy_id\n";
  for (const auto& point : points) {
    csv += format9(point.weights[0]) + "," + format9(point.weights[1]) + "," +
           format9(point.payoff[0]) + "," + format9(point.payoff[1]) + "," + point.policy_id +
           "\n";
  }
  return csv;
}

std::string trajectories_csv(const std::vector<Trajectory>& trajectories,
                             const ProblemSet& problems) {
  const int k = problems.size();
  std::string csv = "step,obs,action,state";
  for (int j = 1; j <= k; ++j) csv += ",eff_w_" + std::to_string(j);
  csv += ",model_tag\n";
  const auto& observation_labels = problems.observation_labels();
  const auto& action_labels = problems.action_labels();
  for (const auto& trajectory : trajectories) {
    const auto& state_labels = problems.principals[trajectory.model_tag].state_labels;
    for (std::size_t t = 0; t < trajectory.outcome.observations.size(); ++t) {
      csv += std::to_string(t + 1) + "," +
             observation_labels[trajectory.outcome.observations[t]] + "," +
             action_labels[trajectory.outcome.actions[t]] + "," +
             state_labels[trajectory.outcome.states[t]];
      for (int j = 0; j < k; ++j) csv += "," + format9(trajectory.effective_weights[t][j]);
      csv += "," + std::to_string(trajectory.model_tag + 1) + "\n";
    }
  }
  return csv;
}

json payoffs_report_json(const ProblemSet& problems, const PayoffTable& payoffs) {
  json doc;
  doc["mode"] = "payoffs";
  doc["instance_hash"] = instance_hash_hex(problems);
  doc["num_policies"] = payoffs.num_policies;
  json rows = json::array();
  for (std::uint64_t i = 0; i < payoffs.num_policies; ++i) {
    const auto row = payoffs.row(i);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  doc["payoffs"] = std::move(rows);
  doc["verdicts"] = json::array();
  doc["witnesses"] = json::array();
  return doc;
}

json verify_report_json(const ProblemSet& problems, std::span<const double> candidate,
                        const ParetoVerdict& verdict) {
  json doc;
  doc["mode"] = "verify";
  doc["instance_hash"] = instance_hash_hex(problems);
  doc["target"] = std::vector<double>(candidate.begin(), candidate.end());
  doc["verdicts"] = json::array({json{{"claim", "candidate payoff is Pareto-optimal"},
                                      {"holds", verdict.pareto_optimal},
                                      {"detail", verdict.detail}}});
  doc["witnesses"] = verdict.witness.empty() ? json::array()
                                             : json::array({verdict.witness});
  return doc;
}

json prop1_report_json(const ProblemSet& problems, const Prop1Report& report) {
  json doc;
  doc["mode"] = "prop1";
  doc["instance_hash"] = instance_hash_hex(problems);
  doc["target"] = report.target;
  doc["impossibility_confirmed"] = report.impossibility_confirmed;
  doc["change_points"] = report.change_points;
  const auto& action_labels = problems.action_labels();
  json entries = json::array();
  json witnesses = json::array();
  for (const auto& entry : report.entries) {
    json argmax = json::array();
    for (const auto& actions : entry.argmax_actions) {
      json labels = json::array();
      for (int a : actions) labels.push_back(action_labels[a]);
      argmax.push_back(std::move(labels));
    }
    entries.push_back(json{{"r", entry.r},
                           {"argmax_actions", std::move(argmax)},
                           {"best_payoff", entry.best_payoff},
                           {"best_gap", entry.best_gap},
                           {"achieves_target", entry.achieves_target}});
    if (entry.achieves_target)
      witnesses.push_back(json{{"r", entry.r}, {"payoff", entry.best_payoff}});
  }
  doc["entries"] = std::move(entries);
  doc["verdicts"] =
      json::array({json{{"claim", "no fixed-over-time weight reaches the target"},
                        {"holds", report.impossibility_confirmed}}});
  doc["witnesses"] = std::move(witnesses);
  return doc;
}

json bet_settling_report_json(const BetSettlingReport& report) {
  json doc;
  doc["generator"] = report.generator_model == kMixtureGenerator
                         ? json("mixture")
                         : json(report.generator_model + 1);
  doc["seed"] = report.seed;
  doc["count"] = report.count;
  json groups = json::array();
  for (const auto& group : report.per_model) {
    groups.push_back(json{{"model_tag", group.model_tag + 1},
                          {"trajectories", group.trajectories},
                          {"mean_effective_weights", group.mean_effective_weights}});
  }
  doc["per_model"] = std::move(groups);
  doc["overall_mean_effective_weights"] = report.overall_mean;
  return doc;
}

std::string read_text_file(const std::string& path) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream) throw std::invalid_argument("cannot read file '" + path + "'");
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) throw std::invalid_argument("cannot write file '" + path + "'");
  stream << contents;
}

}  // namespace mpp
