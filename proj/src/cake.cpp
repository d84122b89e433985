#include "mpp/cake.hpp"

namespace mpp {
namespace {

// States: the two colors at time 1, plus one absorbing state per division of
// the cake at time 2.
const std::vector<std::string> kStates = {"red", "green", "all-none", "half-half",
                                          "none-all"};
const std::vector<std::string> kActions = {"all-none", "half-half", "none-all"};
const std::vector<std::string> kObservations = {"red", "green"};

PrincipalPomdp make_principal(const std::string& name, double p_red,
                              const std::vector<double>& division_utilities) {
  PrincipalPomdp pomdp;
  pomdp.name = name;
  pomdp.state_labels = kStates;
  pomdp.action_labels = kActions;
  pomdp.observation_labels = kObservations;
  pomdp.horizon = 1;
  pomdp.prior = {p_red, 1.0 - p_red, 0.0, 0.0, 0.0};

  const int ns = 5;
  const int na = 3;
  pomdp.transition.assign(ns, std::vector<std::vector<double>>(na, std::vector<double>(ns, 0.0)));
  for (int color = 0; color < 2; ++color)
    for (int a = 0; a < na; ++a) pomdp.transition[color][a][2 + a] = 1.0;
  for (int division = 2; division < ns; ++division)
    for (int a = 0; a < na; ++a) pomdp.transition[division][a][division] = 1.0;

  pomdp.observation.assign(ns, std::vector<double>(2, 0.0));
  pomdp.observation[0][0] = 1.0;  // red cake is seen as red
  pomdp.observation[1][1] = 1.0;
  for (int division = 2; division < ns; ++division)
    pomdp.observation[division][0] = 1.0;  // unreachable at observation time

  AdditiveUtility utility;
  utility.step.assign(ns, std::vector<std::vector<double>>(na, std::vector<double>(ns, 0.0)));
  utility.terminal.assign(ns, 0.0);
  for (int division = 0; division < 3; ++division)
    utility.terminal[2 + division] = division_utilities[division];
  pomdp.utility = std::move(utility);
  return pomdp;
}

}  // namespace

ProblemSet cake_problem() {
  ProblemSet problems;
  problems.principals.push_back(make_principal("alice", 0.9, {30.0, 20.0, 0.0}));
  problems.principals.push_back(make_principal("bob", 0.1, {0.0, 20.0, 30.0}));
  return problems;
}

FullMemoryPolicy cake_pi_hat() {
  FullMemoryPolicy policy = FullMemoryPolicy::pure_constant(1, 2, 3, 0);
  // red -> all-none (index 0), green -> none-all (index 2)
  policy.steps[0][1] = {0.0, 0.0, 1.0};
  return policy;
}

FullMemoryPolicy cake_half_half() {
  return FullMemoryPolicy::pure_constant(1, 2, 3, 1);
}

}  // namespace mpp
