#pragma once

#include <string>

#include <json.hpp>

#include "mpp/analysis.hpp"
#include "mpp/oracle.hpp"
#include "mpp/pomdp.hpp"
#include "mpp/solver.hpp"

namespace mpp {

// Problem files. Distributions are keyed by labels; transition rows use
// "state|action" keys and additive step rewards "state|action|state" keys.
// Entries omitted from a distribution row are zero.
nlohmann::json problem_to_json(const ProblemSet& problems);
ProblemSet problem_from_json(const nlohmann::json& doc);
ProblemSet load_problem(const std::string& path);
void save_problem(const ProblemSet& problems, const std::string& path);

/// Hex form of structural_hash; keys oracle reports and CSV provenance.
std::string instance_hash_hex(const ProblemSet& problems);

// Policy files: one flat object mapping history keys "o1,a1,o2,..." (labels
// joined with commas) to action distributions {action: probability}. Every
// history of every step must be present.
nlohmann::json policy_to_json(const FullMemoryPolicy& policy,
                              const std::vector<std::string>& observation_labels,
                              const std::vector<std::string>& action_labels);
FullMemoryPolicy policy_from_json(const nlohmann::json& doc,
                                  const std::vector<std::string>& observation_labels,
                                  const std::vector<std::string>& action_labels, int horizon,
                                  std::uint64_t cap = kDefaultPolicyTableCap);
void save_policy(const FullMemoryPolicy& policy, const ProblemSet& problems,
                 const std::string& path);
FullMemoryPolicy load_policy(const std::string& path, const ProblemSet& problems,
                             std::uint64_t cap = kDefaultPolicyTableCap);

/// CSV with header w1,w2,payoff1,payoff2,policy_id (9-decimal fixed point).
std::string frontier_csv(const std::vector<FrontierPoint>& points);

/// CSV with header step,obs,action,state,eff_w_1,...,eff_w_k,model_tag.
/// Trajectories are concatenated; step restarts at 1.
std::string trajectories_csv(const std::vector<Trajectory>& trajectories,
                             const ProblemSet& problems);

nlohmann::json payoffs_report_json(const ProblemSet& problems, const PayoffTable& payoffs);
nlohmann::json verify_report_json(const ProblemSet& problems,
                                  std::span<const double> candidate,
                                  const ParetoVerdict& verdict);
nlohmann::json prop1_report_json(const ProblemSet& problems, const Prop1Report& report);
nlohmann::json bet_settling_report_json(const BetSettlingReport& report);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace mpp
