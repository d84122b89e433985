#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mpp/analysis.hpp"
#include "mpp/cake.hpp"
#include "mpp/json_io.hpp"
#include "mpp/kernels.hpp"
#include "mpp/oracle.hpp"
#include "mpp/solver.hpp"
#include "mpp/util.hpp"
#include "mpp/validate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;   // bad input, validation failure
constexpr int kExitSizeCap = 3;   // instance exceeds a size cap
constexpr int kExitVerifyFail = 4;  // a verification ran and failed

struct Options {
  std::string problem_path;
  std::string weights_text;
  std::string target_text;
  std::string out_path;
  std::string policy_path;
  std::string model_text = "mixture";
  std::string mode;
  int grid = 101;
  int r_grid = 1001;
  std::uint64_t seed = 0;
  int count = 1000;
  std::uint64_t cap = 0;  // 0: use the command's default cap

  std::uint64_t table_cap() const { return cap ? cap : mpp::kDefaultPolicyTableCap; }
  std::uint64_t enumeration_cap() const { return cap ? cap : mpp::kDefaultEnumerationCap; }
};

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> values;
  std::string current;
  for (char c : text + ",") {
    if (c == ',') {
      if (current.empty()) throw std::invalid_argument("empty entry in list '" + text + "'");
      values.push_back(std::stod(current));
      current.clear();
    } else {
      current += c;
    }
  }
  return values;
}

mpp::ProblemSet load_validated(const std::string& path) {
  if (path.empty()) throw std::invalid_argument("--problem is required");
  mpp::ProblemSet problems = mpp::load_problem(path);
  const mpp::ValidationReport report = mpp::validate(problems);
  if (!report.ok()) {
    for (const auto& violation : report.violations)
      std::cerr << "validation: " << violation << "\n";
    throw std::invalid_argument("problem file failed validation");
  }
  return problems;
}

mpp::WeightVector parse_weights(const std::string& text, int k) {
  if (text.empty()) return mpp::WeightVector::uniform(k);
  const std::vector<double> raw = parse_numbers(text);
  if (static_cast<int>(raw.size()) != k)
    throw std::invalid_argument("expected " + std::to_string(k) + " weights");
  double sum = 0.0;
  for (double w : raw) {
    if (w < 0.0) throw std::invalid_argument("weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("weights must sum to 1 (within 1e-9)");
  return mpp::WeightVector::normalized(raw);
}

void print_payoffs(const std::vector<double>& payoff) {
  for (std::size_t j = 0; j < payoff.size(); ++j)
    std::printf("E%zu = %s\n", j + 1, mpp::format9(payoff[j]).c_str());
}

std::string join9(const std::vector<double>& values) {
  std::string text;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) text += ",";
    text += mpp::format9(values[i]);
  }
  return text;
}

int cmd_solve(const Options& options) {
  const mpp::ProblemSet problems = load_validated(options.problem_path);
  const mpp::WeightVector weights = parse_weights(options.weights_text, problems.size());
  const mpp::SolveResult result = mpp::pareto_solve(problems, weights, options.table_cap());
  print_payoffs(result.payoff);
  const std::string out = options.out_path.empty() ? "policy.json" : options.out_path;
  mpp::save_policy(result.policy, problems, out);
  std::printf("policy written to %s\n", out.c_str());
  std::printf("RESULT solve ok payoffs=%s out=%s\n", join9(result.payoff).c_str(), out.c_str());
  return kExitOk;
}

int cmd_frontier(const Options& options) {
  const mpp::ProblemSet problems = load_validated(options.problem_path);
  const auto points = mpp::frontier_sweep(problems, options.grid, options.table_cap());
  const std::string out = options.out_path.empty() ? "frontier.csv" : options.out_path;
  mpp::write_text_file(out, mpp::frontier_csv(points));
  for (const auto& point : points)
    std::printf("w1=%s payoff=(%s)\n", mpp::format9(point.weights[0]).c_str(),
                join9(point.payoff).c_str());
  std::printf("RESULT frontier ok points=%zu out=%s\n", points.size(), out.c_str());
  return kExitOk;
}

int cmd_oracle(const Options& options) {
  const mpp::ProblemSet problems = load_validated(options.problem_path);
  const std::uint64_t cap = options.enumeration_cap();
  nlohmann::json report;
  bool holds = true;
  if (options.mode == "payoffs") {
    const mpp::PayoffTable payoffs = mpp::brute_force_payoffs(problems, cap);
    report = mpp::payoffs_report_json(problems, payoffs);
    for (std::uint64_t i = 0; i < payoffs.num_policies; ++i) {
      const auto row = payoffs.row(i);
      std::printf("%s\n", join9({row.begin(), row.end()}).c_str());
    }
  } else if (options.mode == "verify") {
    if (options.target_text.empty())
      throw std::invalid_argument("--target is required for --mode verify");
    const std::vector<double> target = parse_numbers(options.target_text);
    const mpp::ParetoVerdict verdict = mpp::verify_pareto(problems, target, cap);
    report = mpp::verify_report_json(problems, target, verdict);
    holds = verdict.pareto_optimal;
    if (!holds)
      std::printf("dominated: witness payoff (%s)\n", join9(verdict.witness).c_str());
    else
      std::printf("pareto-optimal\n");
  } else if (options.mode == "prop1") {
    if (options.target_text.empty())
      throw std::invalid_argument("--target is required for --mode prop1");
    const std::vector<double> target = parse_numbers(options.target_text);
    const mpp::Prop1Report prop1 = mpp::prop1_verify(problems, target, options.r_grid, cap);
    report = mpp::prop1_report_json(problems, prop1);
    holds = prop1.impossibility_confirmed;
    std::printf("change points:");
    for (double r : prop1.change_points) std::printf(" %s", mpp::format9(r).c_str());
    std::printf("\n");
    if (!holds) {
      for (const auto& entry : prop1.entries)
        if (entry.achieves_target)
          std::printf("achievable at r=%s with payoff (%s)\n",
                      mpp::format9(entry.r).c_str(), join9(entry.best_payoff).c_str());
    }
  } else {
    throw std::invalid_argument("--mode must be one of payoffs|verify|prop1");
  }
  if (!options.out_path.empty())
    mpp::write_text_file(options.out_path, report.dump(2) + "\n");
  std::printf("RESULT oracle %s %s\n", options.mode.c_str(), holds ? "PASS" : "FAIL");
  return holds ? kExitOk : kExitVerifyFail;
}

int cmd_trace(const Options& options) {
  const mpp::ProblemSet problems = load_validated(options.problem_path);
  const mpp::WeightVector weights = parse_weights(options.weights_text, problems.size());
  if (options.count < 1) throw std::invalid_argument("--count must be >= 1");

  int generator = mpp::kMixtureGenerator;
  if (options.model_text != "mixture" && options.model_text != "mix") {
    generator = std::stoi(options.model_text) - 1;
    if (generator < 0 || generator >= problems.size())
      throw std::invalid_argument("--model must be 'mixture' or a principal number");
  }

  mpp::FullMemoryPolicy policy =
      options.policy_path.empty()
          ? mpp::pareto_solve(problems, weights, options.table_cap()).policy
          : mpp::load_policy(options.policy_path, problems, options.table_cap());

  const auto trajectories =
      mpp::simulate(problems, weights, generator, policy, options.seed, options.count);
  const std::string out = options.out_path.empty() ? "trajectories.csv" : options.out_path;
  mpp::write_text_file(out, mpp::trajectories_csv(trajectories, problems));

  const mpp::BetSettlingReport report = mpp::bet_settling_report(
      problems, weights, policy, generator, options.seed, options.count);
  std::printf("%s\n", mpp::bet_settling_report_json(report).dump(2).c_str());
  std::printf("RESULT trace ok trajectories=%d out=%s\n", options.count, out.c_str());
  return kExitOk;
}

int cmd_demo_cake(const Options& options) {
  namespace fs = std::filesystem;
  const fs::path dir = options.out_path.empty() ? fs::path(".") : fs::path(options.out_path);
  fs::create_directories(dir);

  const mpp::ProblemSet cake = mpp::cake_problem();
  const fs::path problem_path = dir / "cake.json";
  mpp::save_problem(cake, problem_path.string());
  std::printf("wrote %s\n", problem_path.string().c_str());

  const mpp::WeightVector even(std::vector<double>{0.5, 0.5});
  const mpp::SolveResult solved = mpp::pareto_solve(cake, even);
  mpp::save_policy(solved.policy, cake, (dir / "cake_policy.json").string());
  std::printf("solve at w=(0.5,0.5): E1 = %s, E2 = %s\n",
              mpp::format9(solved.payoff[0]).c_str(), mpp::format9(solved.payoff[1]).c_str());
  std::printf("E1 = E2 = 27 under pi-hat\n");

  const mpp::FullMemoryPolicy half = mpp::cake_half_half();
  const double h1 = mpp::evaluate(cake.principals[0], half);
  const double h2 = mpp::evaluate(cake.principals[1], half);
  std::printf("(half,half) yields %s,%s\n", mpp::format9(h1).c_str(),
              mpp::format9(h2).c_str());
  std::printf("(half,half) yields 20,20\n");

  const auto frontier = mpp::frontier_sweep(cake, options.grid);
  mpp::write_text_file((dir / "cake_frontier.csv").string(), mpp::frontier_csv(frontier));
  std::printf("frontier: %zu distinct payoffs\n", frontier.size());
  for (const auto& point : frontier)
    std::printf("  (%s)\n", join9(point.payoff).c_str());

  const mpp::Prop1Report prop1 =
      mpp::prop1_verify(cake, std::vector<double>{solved.payoff[0], solved.payoff[1]},
                        options.r_grid);
  mpp::write_text_file((dir / "cake_prop1.json").string(),
                       mpp::prop1_report_json(cake, prop1).dump(2) + "\n");
  std::printf("prop1 breakpoints r = 1/3 and 2/3; fixed-weight impossibility of (27,27): %s\n",
              prop1.impossibility_confirmed ? "PASS" : "FAIL");
  std::printf("RESULT demo-cake %s\n", prop1.impossibility_confirmed ? "ok" : "FAIL");
  return prop1.impossibility_confirmed ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact multi-principal POMDP solver and verification toolkit"};
  app.require_subcommand(1);
  Options options;

  auto add_common = [&](CLI::App* cmd, bool needs_problem) {
    if (needs_problem)
      cmd->add_option("--problem", options.problem_path, "problem JSON file")->required();
    cmd->add_option("--out", options.out_path, "output path");
    cmd->add_option("--cap", options.cap, "size cap override");
  };

  CLI::App* solve = app.add_subcommand("solve", "compute a Pareto-optimal policy");
  add_common(solve, true);
  solve->add_option("--weights", options.weights_text, "comma-separated principal weights");

  CLI::App* frontier = app.add_subcommand("frontier", "sweep the two-principal payoff frontier");
  add_common(frontier, true);
  frontier->add_option("--grid", options.grid, "number of weight grid points")
      ->check(CLI::Range(2, 1000000));

  CLI::App* oracle = app.add_subcommand("oracle", "brute-force verification");
  add_common(oracle, true);
  oracle->add_option("--mode", options.mode, "payoffs|verify|prop1")->required();
  oracle->add_option("--target", options.target_text, "target payoff p1,p2");
  oracle->add_option("--r-grid", options.r_grid, "grid size for fixed-weight scan")
      ->check(CLI::Range(2, 1000000));

  CLI::App* trace = app.add_subcommand("trace", "simulate runs and report weight shifts");
  add_common(trace, true);
  trace->add_option("--weights", options.weights_text, "comma-separated principal weights");
  trace->add_option("--policy", options.policy_path, "policy JSON (default: solve first)");
  trace->add_option("--seed", options.seed, "random seed");
  trace->add_option("--count", options.count, "number of trajectories");
  trace->add_option("--model", options.model_text,
                    "generating model: 'mixture' or a principal number");

  CLI::App* demo = app.add_subcommand("demo-cake", "write and analyze the built-in example");
  add_common(demo, false);
  demo->add_option("--grid", options.grid, "frontier grid size");
  demo->add_option("--r-grid", options.r_grid, "fixed-weight grid size");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(options);
    if (frontier->parsed()) return cmd_frontier(options);
    if (oracle->parsed()) return cmd_oracle(options);
    if (trace->parsed()) return cmd_trace(options);
    if (demo->parsed()) return cmd_demo_cake(options);
  } catch (const mpp::SizeCapError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitSizeCap;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
