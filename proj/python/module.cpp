#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "mpp/analysis.hpp"
#include "mpp/cake.hpp"
#include "mpp/json_io.hpp"
#include "mpp/kernels.hpp"
#include "mpp/oracle.hpp"
#include "mpp/solver.hpp"
#include "mpp/validate.hpp"

namespace py = pybind11;
using namespace mpp;

namespace {

py::object json_to_py(const nlohmann::json& value) {
  switch (value.type()) {
    case nlohmann::json::value_t::null:
      return py::none();
    case nlohmann::json::value_t::boolean:
      return py::bool_(value.get<bool>());
    case nlohmann::json::value_t::number_integer:
      return py::int_(value.get<long long>());
    case nlohmann::json::value_t::number_unsigned:
      return py::int_(value.get<unsigned long long>());
    case nlohmann::json::value_t::number_float:
      return py::float_(value.get<double>());
    case nlohmann::json::value_t::string:
      return py::str(value.get<std::string>());
    case nlohmann::json::value_t::array: {
      py::list list;
      for (const auto& item : value) list.append(json_to_py(item));
      return list;
    }
    case nlohmann::json::value_t::object: {
      py::dict dict;
      for (const auto& [key, item] : value.items()) dict[py::str(key)] = json_to_py(item);
      return dict;
    }
    default:
      return py::none();
  }
}

WeightVector weights_from_list(const std::vector<double>& values) {
  return WeightVector::normalized(values);
}

}  // namespace

PYBIND11_MODULE(mpp, m) {
  m.doc() = "Exact solver and verification toolkit for sequential decision-making on "
            "behalf of several principals with differing beliefs";

  py::register_exception<SizeCapError>(m, "SizeCapError", PyExc_RuntimeError);

  py::class_<History>(m, "History")
      .def(py::init([](std::vector<int> observations, std::vector<int> actions) {
             return History{std::move(observations), std::move(actions)};
           }),
           py::arg("observations") = std::vector<int>{},
           py::arg("actions") = std::vector<int>{})
      .def_readonly("observations", &History::observations)
      .def_readonly("actions", &History::actions)
      .def_property_readonly("step", &History::step);

  py::class_<FullMemoryPolicy>(m, "FullMemoryPolicy")
      .def_readonly("horizon", &FullMemoryPolicy::horizon)
      .def_readonly("num_observations", &FullMemoryPolicy::num_observations)
      .def_readonly("num_actions", &FullMemoryPolicy::num_actions)
      .def("distribution", &FullMemoryPolicy::distribution,
           py::return_value_policy::copy)
      .def_static("pure_constant", &FullMemoryPolicy::pure_constant, py::arg("horizon"),
                  py::arg("num_observations"), py::arg("num_actions"), py::arg("action"),
                  py::arg("cap") = kDefaultPolicyTableCap)
      .def_static("uniform_random", &FullMemoryPolicy::uniform, py::arg("horizon"),
                  py::arg("num_observations"), py::arg("num_actions"),
                  py::arg("cap") = kDefaultPolicyTableCap);

  py::class_<PrincipalPomdp>(m, "PrincipalPomdp")
      .def_readonly("name", &PrincipalPomdp::name)
      .def_readonly("state_labels", &PrincipalPomdp::state_labels)
      .def_readonly("action_labels", &PrincipalPomdp::action_labels)
      .def_readonly("observation_labels", &PrincipalPomdp::observation_labels)
      .def_readonly("horizon", &PrincipalPomdp::horizon)
      .def_readonly("prior", &PrincipalPomdp::prior);

  py::class_<ProblemSet>(m, "ProblemSet")
      .def_property_readonly("size", &ProblemSet::size)
      .def_property_readonly("horizon", &ProblemSet::horizon)
      .def_property_readonly("action_labels", &ProblemSet::action_labels)
      .def_property_readonly("observation_labels", &ProblemSet::observation_labels)
      .def("principal",
           [](const ProblemSet& problems, int j) -> const PrincipalPomdp& {
             return problems.principals.at(j);
           },
           py::return_value_policy::reference_internal)
      .def("to_json", [](const ProblemSet& problems) {
        return problem_to_json(problems).dump(2);
      });

  py::class_<WeightVector>(m, "WeightVector")
      .def(py::init(&weights_from_list))
      .def_property_readonly("values", &WeightVector::values);

  py::class_<MixturePomdp>(m, "MixturePomdp")
      .def_readonly("pomdp", &MixturePomdp::pomdp)
      .def_readonly("tag_of_state", &MixturePomdp::tag_of_state)
      .def_readonly("base_state", &MixturePomdp::base_state);

  py::class_<PosteriorResult>(m, "PosteriorResult")
      .def_readonly("weights", &PosteriorResult::weights)
      .def_readonly("degenerate", &PosteriorResult::degenerate);

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("policy", &SolveResult::policy)
      .def_readonly("payoff", &SolveResult::payoff)
      .def_property_readonly("weights_used",
                             [](const SolveResult& r) { return r.weights_used.values(); })
      .def_readonly("history_values", &SolveResult::history_values);

  py::class_<FrontierPoint>(m, "FrontierPoint")
      .def_property_readonly("weights",
                             [](const FrontierPoint& p) { return p.weights.values(); })
      .def_readonly("payoff", &FrontierPoint::payoff)
      .def_readonly("policy", &FrontierPoint::policy)
      .def_readonly("policy_id", &FrontierPoint::policy_id);

  py::class_<ParetoVerdict>(m, "ParetoVerdict")
      .def_readonly("pareto_optimal", &ParetoVerdict::pareto_optimal)
      .def_readonly("witness", &ParetoVerdict::witness)
      .def_readonly("detail", &ParetoVerdict::detail);

  py::class_<Trajectory>(m, "Trajectory")
      .def_property_readonly("states",
                             [](const Trajectory& t) { return t.outcome.states; })
      .def_property_readonly("observations",
                             [](const Trajectory& t) { return t.outcome.observations; })
      .def_property_readonly("actions",
                             [](const Trajectory& t) { return t.outcome.actions; })
      .def_readonly("model_tag", &Trajectory::model_tag)
      .def_readonly("effective_weights", &Trajectory::effective_weights)
      .def_readonly("realized_utilities", &Trajectory::realized_utilities);

  m.def("load_problem", &load_problem, py::arg("path"));
  m.def("problem_from_json",
        [](const std::string& text) { return problem_from_json(nlohmann::json::parse(text)); },
        py::arg("text"));
  m.def("validate", [](const ProblemSet& problems) { return validate(problems).violations; });
  m.def("instance_hash", &instance_hash_hex);
  m.def("cake_problem", &cake_problem);
  m.def("cake_pi_hat", &cake_pi_hat);
  m.def("cake_half_half", &cake_half_half);

  m.def("evaluate",
        [](const PrincipalPomdp& pomdp, const FullMemoryPolicy& policy) {
          return evaluate(pomdp, policy);
        },
        py::arg("pomdp"), py::arg("policy"));
  m.def("joint_probability", &joint_probability, py::arg("pomdp"), py::arg("outcome"),
        py::arg("policy"));
  m.def("causal_obs_probability",
        [](const PrincipalPomdp& pomdp, const std::vector<int>& observations,
           const std::vector<int>& actions) {
          return causal_obs_probability(pomdp, observations, actions);
        },
        py::arg("pomdp"), py::arg("observations"), py::arg("actions"));

  py::class_<Outcome>(m, "Outcome")
      .def(py::init([](std::vector<int> states, std::vector<int> observations,
                       std::vector<int> actions) {
             return Outcome{std::move(states), std::move(observations), std::move(actions)};
           }),
           py::arg("states"), py::arg("observations"), py::arg("actions"))
      .def_readonly("states", &Outcome::states)
      .def_readonly("observations", &Outcome::observations)
      .def_readonly("actions", &Outcome::actions);

  m.def("build_mixture",
        [](const ProblemSet& problems, const std::vector<double>& weights) {
          return build_mixture(problems, weights_from_list(weights));
        },
        py::arg("problems"), py::arg("weights"));
  m.def("principal_posterior",
        [](const ProblemSet& problems, const std::vector<double>& weights,
           const History& history) {
          return principal_posterior(problems, weights_from_list(weights), history);
        },
        py::arg("problems"), py::arg("weights"), py::arg("history"));
  m.def("effective_weights",
        [](const ProblemSet& problems, const std::vector<double>& weights,
           const History& history) {
          return effective_weights(problems, weights_from_list(weights), history);
        },
        py::arg("problems"), py::arg("weights"), py::arg("history"));

  m.def("bellman_solve",
        [](const PrincipalPomdp& pomdp, std::uint64_t cap) {
          return bellman_solve(pomdp, cap);
        },
        py::arg("pomdp"), py::arg("cap") = kDefaultPolicyTableCap);
  m.def("pareto_solve",
        [](const ProblemSet& problems, const std::vector<double>& weights, std::uint64_t cap) {
          return pareto_solve(problems, weights_from_list(weights), cap);
        },
        py::arg("problems"), py::arg("weights"), py::arg("cap") = kDefaultPolicyTableCap);
  m.def("frontier_sweep",
        [](const ProblemSet& problems, int grid_size, std::uint64_t cap) {
          return frontier_sweep(problems, grid_size, cap);
        },
        py::arg("problems"), py::arg("grid_size"), py::arg("cap") = kDefaultPolicyTableCap);
  m.def("naive_solve",
        [](const ProblemSet& problems, double r, const std::map<int, int>& selection,
           std::uint64_t cap) {
          return naive_solve(problems, r, SelectionRule{selection}, cap);
        },
        py::arg("problems"), py::arg("r"), py::arg("selection") = std::map<int, int>{},
        py::arg("cap") = kDefaultPolicyTableCap);

  m.def("brute_force_payoffs",
        [](const ProblemSet& problems, std::uint64_t cap) {
          return brute_force_payoffs(problems, cap).to_points();
        },
        py::arg("problems"), py::arg("cap") = kDefaultEnumerationCap);
  m.def("verify_pareto",
        [](const ProblemSet& problems, const std::vector<double>& candidate,
           std::uint64_t cap) { return verify_pareto(problems, candidate, cap); },
        py::arg("problems"), py::arg("candidate"), py::arg("cap") = kDefaultEnumerationCap);
  m.def("prop1_verify",
        [](const ProblemSet& problems, const std::vector<double>& target, int r_grid,
           std::uint64_t cap) {
          return json_to_py(
              prop1_report_json(problems, prop1_verify(problems, target, r_grid, cap)));
        },
        py::arg("problems"), py::arg("target"), py::arg("r_grid") = 1001,
        py::arg("cap") = kDefaultEnumerationCap);

  m.attr("MIXTURE_GENERATOR") = kMixtureGenerator;
  m.def("simulate",
        [](const ProblemSet& problems, const std::vector<double>& weights, int generator_model,
           const FullMemoryPolicy& policy, std::uint64_t seed, int count) {
          return simulate(problems, weights_from_list(weights), generator_model, policy, seed,
                          count);
        },
        py::arg("problems"), py::arg("weights"), py::arg("generator_model"),
        py::arg("policy"), py::arg("seed"), py::arg("count"));
  m.def("bet_settling_report",
        [](const ProblemSet& problems, const std::vector<double>& weights,
           const FullMemoryPolicy& policy, int generator_model, std::uint64_t seed,
           int count) {
          return json_to_py(bet_settling_report_json(bet_settling_report(
              problems, weights_from_list(weights), policy, generator_model, seed, count)));
        },
        py::arg("problems"), py::arg("weights"), py::arg("policy"),
        py::arg("generator_model"), py::arg("seed"), py::arg("count"));
  m.def("exact_mean_effective_weights",
        [](const ProblemSet& problems, const std::vector<double>& weights,
           const FullMemoryPolicy& policy, int generator_model) {
          return exact_mean_effective_weights(problems, weights_from_list(weights), policy,
                                              generator_model);
        },
        py::arg("problems"), py::arg("weights"), py::arg("policy"),
        py::arg("generator_model"));

  m.def("policy_to_json",
        [](const FullMemoryPolicy& policy, const ProblemSet& problems) {
          return policy_to_json(policy, problems.observation_labels(),
                                problems.action_labels())
              .dump(2);
        },
        py::arg("policy"), py::arg("problems"));
  m.def("policy_from_json",
        [](const std::string& text, const ProblemSet& problems, std::uint64_t cap) {
          return policy_from_json(nlohmann::json::parse(text), problems.observation_labels(),
                                  problems.action_labels(), problems.horizon(), cap);
        },
        py::arg("text"), py::arg("problems"), py::arg("cap") = kDefaultPolicyTableCap);
  m.def("frontier_csv", &frontier_csv, py::arg("points"));
}
