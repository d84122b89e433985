#include <doctest.h>

#include <random>

#include "mpp/cake.hpp"
#include "mpp/kernels.hpp"
#include "mpp/oracle.hpp"
#include "mpp/solver.hpp"
#include "mpp/util.hpp"
#include "support/test_instances.hpp"

using namespace mpp;
using mpp::testing::random_problem_set;
using mpp::testing::random_weights;

namespace {

bool is_pure(const std::vector<double>& dist, int action) {
  for (int a = 0; a < static_cast<int>(dist.size()); ++a)
    if (dist[a] != (a == action ? 1.0 : 0.0)) return false;
  return true;
}

}  // namespace

TEST_CASE("solving for the first principal alone always hands over the cake") {
  ProblemSet cake = cake_problem();
  const SolveResult result = bellman_solve(cake.principals[0]);
  // all-none dominates regardless of color, so the payoff is the full 30.
  CHECK(result.payoff.size() == 1);
  CHECK(result.payoff[0] == doctest::Approx(30.0).epsilon(1e-9));
  CHECK(is_pure(result.policy.steps[0][0], 0));
  CHECK(is_pure(result.policy.steps[0][1], 0));
}

TEST_CASE("the even-coin compound solve recovers the color-contingent policy") {
  const ProblemSet cake = cake_problem();
  const MixturePomdp mixture = build_mixture(cake, WeightVector({0.5, 0.5}));
  const SolveResult result = bellman_solve(mixture.pomdp);
  CHECK(result.payoff[0] == doctest::Approx(27.0).epsilon(1e-9));
  CHECK(is_pure(result.policy.steps[0][0], 0));  // red -> all-none
  CHECK(is_pure(result.policy.steps[0][1], 2));  // green -> none-all
}

TEST_CASE("single-model solves attain the brute-force optimum") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 15; ++trial) {
    // Shapes small enough to enumerate every deterministic policy.
    mpp::testing::InstanceOptions options;
    options.max_actions = 2;
    options.max_observations = 2;
    const ProblemSet problems = random_problem_set(rng, options);
    const auto& pomdp = problems.principals[0];
    ProblemSet single;
    single.principals.push_back(pomdp);
    const SolveResult result = bellman_solve(pomdp);
    const PayoffTable table = brute_force_payoffs(single);
    double best = -1e300;
    for (std::uint64_t i = 0; i < table.num_policies; ++i)
      best = std::max(best, table.row(i)[0]);
    CHECK(result.payoff[0] == doctest::Approx(best).epsilon(1e-9));
  }
}

TEST_CASE("the even-weight Pareto solve reproduces the betting policy and payoffs") {
  const ProblemSet cake = cake_problem();
  const SolveResult result = pareto_solve(cake, WeightVector({0.5, 0.5}));
  CHECK(result.payoff[0] == doctest::Approx(27.0).epsilon(1e-9));
  CHECK(result.payoff[1] == doctest::Approx(27.0).epsilon(1e-9));
  CHECK(is_pure(result.policy.steps[0][0], 0));
  CHECK(is_pure(result.policy.steps[0][1], 2));
  // Payoffs agree with re-evaluating the returned policy.
  CHECK(result.payoff[0] ==
        doctest::Approx(evaluate(cake.principals[0], result.policy)).epsilon(1e-12));
}

TEST_CASE("weight (1,0) reduces to the first principal's solve") {
  const ProblemSet cake = cake_problem();
  const SolveResult pareto = pareto_solve(cake, WeightVector({1.0, 0.0}));
  const SolveResult single = bellman_solve(cake.principals[0]);
  CHECK(pareto.payoff[0] == doctest::Approx(single.payoff[0]).epsilon(1e-12));
}

TEST_CASE("Pareto solves match compound-model solves on random pairs") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 15; ++trial) {
    const ProblemSet problems = random_problem_set(rng);
    const WeightVector weights = random_weights(rng, 2);
    const SolveResult direct = pareto_solve(problems, weights);
    const MixturePomdp mixture = build_mixture(problems, weights);
    const SolveResult compound = bellman_solve(mixture.pomdp);
    for (int j = 0; j < 2; ++j) {
      const double via_compound = evaluate(problems.principals[j], compound.policy);
      CHECK(direct.payoff[j] == doctest::Approx(via_compound).epsilon(1e-9));
    }
  }
}

TEST_CASE("three-principal Pareto solves match their compound solves") {
  std::mt19937_64 rng(33);
  mpp::testing::InstanceOptions options;
  options.num_principals = 3;
  const ProblemSet problems = random_problem_set(rng, options);
  const WeightVector weights = random_weights(rng, 3);
  const SolveResult direct = pareto_solve(problems, weights);
  const SolveResult compound = bellman_solve(build_mixture(problems, weights).pomdp);
  for (int j = 0; j < 3; ++j)
    CHECK(direct.payoff[j] ==
          doctest::Approx(evaluate(problems.principals[j], compound.policy)).epsilon(1e-9));
}

TEST_CASE("identical inputs produce bit-identical solves") {
  std::mt19937_64 rng(34);
  const ProblemSet problems = random_problem_set(rng);
  const WeightVector weights = random_weights(rng, 2);
  const SolveResult a = pareto_solve(problems, weights);
  const SolveResult b = pareto_solve(problems, weights);
  CHECK(a.payoff == b.payoff);
  CHECK(a.policy.steps == b.policy.steps);
  CHECK(a.history_values == b.history_values);
  CHECK(policy_hash(a.policy) == policy_hash(b.policy));
}

TEST_CASE("rescaling one utility and its weight leaves the argmax sets unchanged") {
  std::mt19937_64 rng(35);
  const ProblemSet problems = random_problem_set(rng);
  const double c = 7.5;
  ProblemSet scaled = problems;
  auto& utility = scaled.principals[0].utility;
  if (auto* additive = std::get_if<AdditiveUtility>(&utility)) {
    for (auto& by_action : additive->step)
      for (auto& row : by_action)
        for (double& v : row) v *= c;
    for (double& v : additive->terminal) v *= c;
  } else {
    auto& table = std::get<SequenceTableUtility>(utility);
    table.default_value *= c;
    for (auto& [sequence, value] : table.entries) value *= c;
  }
  const WeightVector weights = WeightVector::normalized({0.4, 0.6});
  const WeightVector counter_scaled = WeightVector::normalized({0.4 / c, 0.6});
  const SolveResult base = pareto_solve(problems, weights);
  const SolveResult rescaled = pareto_solve(scaled, counter_scaled);
  for (std::size_t i = 0; i < base.history_values.size(); ++i) {
    for (std::size_t h = 0; h < base.history_values[i].size(); ++h) {
      CHECK(argmax_set(base.history_values[i][h], kTieTolerance) ==
            argmax_set(rescaled.history_values[i][h], kTieTolerance));
    }
  }
  CHECK(base.policy.steps == rescaled.policy.steps);
}

TEST_CASE("the cake frontier at a fine grid has exactly the five optimal payoffs") {
  const ProblemSet cake = cake_problem();
  const auto frontier = frontier_sweep(cake, 101);
  REQUIRE(frontier.size() == 5);
  const std::vector<std::vector<double>> expected = {
      {0.0, 30.0}, {18.0, 29.0}, {27.0, 27.0}, {29.0, 18.0}, {30.0, 0.0}};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(frontier[i].payoff[0] == doctest::Approx(expected[i][0]).epsilon(1e-9));
    CHECK(frontier[i].payoff[1] == doctest::Approx(expected[i][1]).epsilon(1e-9));
  }
  // Sorted by the first principal's weight, with stable policy ids.
  for (std::size_t i = 1; i < frontier.size(); ++i)
    CHECK(frontier[i - 1].weights[0] < frontier[i].weights[0]);
  for (const auto& point : frontier)
    CHECK(point.policy_id == policy_hash(point.policy));
}

TEST_CASE("a two-point sweep finds the two single-principal optima") {
  const auto frontier = frontier_sweep(cake_problem(), 2);
  REQUIRE(frontier.size() == 2);
  CHECK(frontier[0].payoff[0] == doctest::Approx(0.0));
  CHECK(frontier[0].payoff[1] == doctest::Approx(30.0));
  CHECK(frontier[1].payoff[0] == doctest::Approx(30.0));
  CHECK(frontier[1].payoff[1] == doctest::Approx(0.0));
}

TEST_CASE("identical principals collapse the frontier to one payoff") {
  ProblemSet twins = cake_problem();
  twins.principals[1] = twins.principals[0];
  twins.principals[1].name = "alice-too";
  const auto frontier = frontier_sweep(twins, 25);
  CHECK(frontier.size() == 1);
  CHECK(frontier[0].payoff[0] == doctest::Approx(30.0).epsilon(1e-9));
}

TEST_CASE("frontier sweep rejects other principal counts and tiny grids") {
  std::mt19937_64 rng(36);
  mpp::testing::InstanceOptions options;
  options.num_principals = 3;
  const ProblemSet problems = random_problem_set(rng, options);
  CHECK_THROWS_AS(frontier_sweep(problems, 11), std::invalid_argument);
  CHECK_THROWS_AS(frontier_sweep(cake_problem(), 1), std::invalid_argument);
}

TEST_CASE("a low fixed weight forces giving the whole cake to the second principal") {
  const ProblemSet cake = cake_problem();
  const SolveResult result = naive_solve(cake, 0.2);
  CHECK(is_pure(result.policy.steps[0][0], 2));
  CHECK(is_pure(result.policy.steps[0][1], 2));
  CHECK(result.payoff[0] == doctest::Approx(0.0));
  CHECK(result.payoff[1] == doctest::Approx(30.0).epsilon(1e-9));
}

TEST_CASE("the balanced fixed weight forces the even split worth (20,20)") {
  const ProblemSet cake = cake_problem();
  const SolveResult result = naive_solve(cake, 0.5);
  CHECK(is_pure(result.policy.steps[0][0], 1));
  CHECK(is_pure(result.policy.steps[0][1], 1));
  CHECK(result.payoff[0] == doctest::Approx(20.0).epsilon(1e-9));
  CHECK(result.payoff[1] == doctest::Approx(20.0).epsilon(1e-9));
}

TEST_CASE("at the tie point a selection override can still zero out a principal") {
  const ProblemSet cake = cake_problem();
  SelectionRule give_all_to_bob;
  give_all_to_bob.per_observation_action = {{0, 2}, {1, 2}};
  const SolveResult result = naive_solve(cake, 1.0 / 3.0, give_all_to_bob);
  CHECK(is_pure(result.policy.steps[0][0], 2));
  CHECK(is_pure(result.policy.steps[0][1], 2));
  CHECK(result.payoff[0] == doctest::Approx(0.0));
  // Without the override the tie resolves to the even split.
  const SolveResult first = naive_solve(cake, 1.0 / 3.0);
  CHECK(is_pure(first.policy.steps[0][0], 1));
  CHECK(first.payoff[0] <= 20.0 + 1e-9);
}

TEST_CASE("naive_solve rejects out-of-range weights and wrong principal counts") {
  CHECK_THROWS_AS(naive_solve(cake_problem(), 1.5), std::invalid_argument);
  std::mt19937_64 rng(37);
  mpp::testing::InstanceOptions options;
  options.num_principals = 3;
  CHECK_THROWS_AS(naive_solve(random_problem_set(rng, options), 0.5), std::invalid_argument);
}

TEST_CASE("with shared beliefs the recursion maximizes the weighted utility sum") {
  std::mt19937_64 rng(38);
  mpp::testing::InstanceOptions options;
  options.shared_beliefs = true;
  for (int trial = 0; trial < 5; ++trial) {
    const ProblemSet problems = random_problem_set(rng, options);
    const WeightVector weights = random_weights(rng, 2);
    const SolveResult result = pareto_solve(problems, weights);

    // A principal whose utility is the weighted sum of both, in the shared
    // world model: its solve must make the same choices.
    PrincipalPomdp aggregate = problems.principals[0];
    const auto& u1 = std::get<AdditiveUtility>(problems.principals[0].utility);
    const auto& u2 = std::get<AdditiveUtility>(problems.principals[1].utility);
    AdditiveUtility combined = u1;
    for (int s = 0; s < aggregate.num_states(); ++s) {
      combined.terminal[s] = weights[0] * u1.terminal[s] + weights[1] * u2.terminal[s];
      for (int a = 0; a < aggregate.num_actions(); ++a)
        for (int s2 = 0; s2 < aggregate.num_states(); ++s2)
          combined.step[s][a][s2] =
              weights[0] * u1.step[s][a][s2] + weights[1] * u2.step[s][a][s2];
    }
    aggregate.utility = combined;
    const SolveResult harsanyi = bellman_solve(aggregate);
    CHECK(result.policy.steps == harsanyi.policy.steps);
    for (std::size_t i = 0; i < result.history_values.size(); ++i)
      for (std::size_t h = 0; h < result.history_values[i].size(); ++h)
        CHECK(argmax_set(result.history_values[i][h], kTieTolerance) ==
              argmax_set(harsanyi.history_values[i][h], kTieTolerance));
  }
}

TEST_CASE("solves refuse instances beyond the policy-table cap") {
  const ProblemSet cake = cake_problem();
  CHECK_THROWS_AS(pareto_solve(cake, WeightVector({0.5, 0.5}), /*cap=*/5), SizeCapError);
}
