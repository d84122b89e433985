#include "mpp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mpp/util.hpp"
#include "mpp/validate.hpp"

namespace mpp {
namespace {

constexpr std::uint64_t kU64Max = std::numeric_limits<std::uint64_t>::max();

// Expected utility of every (observation sequence, action sequence) pair,
// marginalized over state sequences, for one principal. This is the oracle's
// own evaluator: plain nested loops over the generative chain, sharing no
// code with the solver or the kernel module.
struct OutcomeTable {
  int n = 0;
  std::uint64_t num_obs_seqs = 0;
  std::uint64_t num_act_seqs = 0;
  std::vector<double> q;  // [obs_seq * num_act_seqs + act_seq]

  double at(std::uint64_t obs_seq, std::uint64_t act_seq) const {
    return q[obs_seq * num_act_seqs + act_seq];
  }
};

OutcomeTable build_outcome_table(const PrincipalPomdp& pomdp) {
  const int n = pomdp.horizon;
  const int ns = pomdp.num_states();
  const int no = pomdp.num_observations();
  const int na = pomdp.num_actions();

  OutcomeTable table;
  table.n = n;
  table.num_obs_seqs = 1;
  table.num_act_seqs = 1;
  for (int t = 0; t < n; ++t) {
    table.num_obs_seqs *= static_cast<std::uint64_t>(no);
    table.num_act_seqs *= static_cast<std::uint64_t>(na);
  }
  table.q.assign(table.num_obs_seqs * table.num_act_seqs, 0.0);

  std::vector<int> obs(n, 0);
  std::uint64_t obs_seq = 0;
  do {
    std::vector<int> act(n, 0);
    std::uint64_t act_seq = 0;
    do {
      double total = 0.0;
      std::vector<int> states(n + 1, 0);
      do {
        double p = pomdp.prior[states[0]];
        for (int t = 0; t < n && p != 0.0; ++t)
          p *= pomdp.observation[states[t]][obs[t]] *
               pomdp.transition[states[t]][act[t]][states[t + 1]];
        if (p != 0.0) total += p * pomdp.utility_of(states, act);
      } while (next_assignment(states, ns));
      table.q[obs_seq * table.num_act_seqs + act_seq] = total;
      ++act_seq;
    } while (next_assignment(act, na));
    ++obs_seq;
  } while (next_assignment(obs, no));
  return table;
}

}  // namespace

PolicyEnumeration::PolicyEnumeration(int horizon, int num_observations, int num_actions,
                                     std::uint64_t cap)
    : horizon_(horizon), num_observations_(num_observations), num_actions_(num_actions) {
  if (horizon < 1 || num_observations < 1 || num_actions < 1)
    throw std::invalid_argument("policy enumeration: shape values must be positive");
  for (int i = 1; i <= horizon; ++i) {
    const std::uint64_t histories = history_count(i, num_observations, num_actions);
    if (histories == kU64Max || slots_ > kU64Max - histories)
      throw SizeCapError("policy enumeration: history table overflows");
    slots_ += histories;
  }
  for (std::uint64_t s = 0; s < slots_; ++s) {
    if (total_count_ > cap / static_cast<std::uint64_t>(num_actions_)) {
      throw SizeCapError("policy enumeration would exceed the cap of " + std::to_string(cap) +
                         " policies");
    }
    total_count_ *= static_cast<std::uint64_t>(num_actions_);
  }
  if (total_count_ > cap)
    throw SizeCapError("policy enumeration would exceed the cap of " + std::to_string(cap) +
                       " policies");
}

bool PolicyEnumeration::next(std::vector<int>& slots) {
  if (!started_) {
    slots.assign(slots_, 0);
    started_ = true;
    return true;
  }
  return next_assignment(slots, num_actions_);
}

FullMemoryPolicy PolicyEnumeration::materialize(std::span<const int> slots) const {
  FullMemoryPolicy policy =
      FullMemoryPolicy::pure_constant(horizon_, num_observations_, num_actions_, 0, kU64Max);
  std::uint64_t offset = 0;
  for (int i = 1; i <= horizon_; ++i) {
    const std::uint64_t count = history_count(i, num_observations_, num_actions_);
    for (std::uint64_t h = 0; h < count; ++h) {
      auto& dist = policy.steps[i - 1][h];
      std::fill(dist.begin(), dist.end(), 0.0);
      dist[slots[offset + h]] = 1.0;
    }
    offset += count;
  }
  return policy;
}

std::vector<std::vector<double>> PayoffTable::to_points() const {
  std::vector<std::vector<double>> points(num_policies);
  for (std::uint64_t i = 0; i < num_policies; ++i) {
    const auto r = row(i);
    points[i].assign(r.begin(), r.end());
  }
  return points;
}

PayoffTable brute_force_payoffs(const ProblemSet& problems, std::uint64_t cap) {
  problems.require_compatible();
  const int n = problems.horizon();
  const int no = static_cast<int>(problems.observation_labels().size());
  const int na = static_cast<int>(problems.action_labels().size());
  const int k = problems.size();

  PolicyEnumeration enumeration(n, no, na, cap);

  std::vector<OutcomeTable> tables;
  tables.reserve(k);
  for (const auto& pomdp : problems.principals) tables.push_back(build_outcome_table(pomdp));

  // Per-step slot offsets and the observation digits of every sequence.
  std::vector<std::uint64_t> offset(n, 0);
  for (int i = 2; i <= n; ++i) offset[i - 1] = offset[i - 2] + history_count(i - 1, no, na);
  const std::uint64_t num_obs_seqs = tables.front().num_obs_seqs;
  std::vector<std::vector<int>> obs_digits;
  obs_digits.reserve(num_obs_seqs);
  {
    std::vector<int> obs(n, 0);
    do {
      obs_digits.push_back(obs);
    } while (next_assignment(obs, no));
  }

  PayoffTable payoffs;
  payoffs.num_principals = k;
  payoffs.num_policies = enumeration.total_count();
  payoffs.values.assign(payoffs.num_policies * static_cast<std::uint64_t>(k), 0.0);

  std::vector<int> slots;
  std::uint64_t index = 0;
  while (enumeration.next(slots)) {
    double* row = payoffs.values.data() + index * static_cast<std::uint64_t>(k);
    for (std::uint64_t o = 0; o < num_obs_seqs; ++o) {
      const auto& obs = obs_digits[o];
      // Walk the policy to find the action sequence this observation
      // sequence induces.
      std::uint64_t hidx = 0;
      std::uint64_t act_seq = 0;
      for (int t = 0; t < n; ++t) {
        hidx = hidx * static_cast<std::uint64_t>(no) + static_cast<std::uint64_t>(obs[t]);
        const int a = slots[offset[t] + hidx];
        act_seq = act_seq * static_cast<std::uint64_t>(na) + static_cast<std::uint64_t>(a);
        hidx = hidx * static_cast<std::uint64_t>(na) + static_cast<std::uint64_t>(a);
      }
      for (int j = 0; j < k; ++j) row[j] += tables[j].at(o, act_seq);
    }
    ++index;
  }
  return payoffs;
}

std::vector<std::array<double, 2>> convex_hull_2d(std::vector<std::array<double, 2>> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  const std::size_t m = points.size();
  if (m <= 2) return points;

  auto cross = [](const std::array<double, 2>& o, const std::array<double, 2>& a,
                  const std::array<double, 2>& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };

  std::vector<std::array<double, 2>> hull(2 * m);
  std::size_t h = 0;
  for (std::size_t i = 0; i < m; ++i) {  // lower chain
    while (h >= 2 && cross(hull[h - 2], hull[h - 1], points[i]) <= 0.0) --h;
    hull[h++] = points[i];
  }
  for (std::size_t i = m - 1, lower = h + 1; i-- > 0;) {  // upper chain
    while (h >= lower && cross(hull[h - 2], hull[h - 1], points[i]) <= 0.0) --h;
    hull[h++] = points[i];
  }
  hull.resize(h - 1);
  return hull;
}

std::pair<double, std::array<double, 2>> max_min_gap_over_hull(
    const std::vector<std::array<double, 2>>& points, const std::array<double, 2>& target) {
  const auto hull = convex_hull_2d(points);
  if (hull.empty())
    return {-std::numeric_limits<double>::infinity(), {0.0, 0.0}};

  auto gap = [&](const std::array<double, 2>& p) {
    return std::min(p[0] - target[0], p[1] - target[1]);
  };
  double best = -std::numeric_limits<double>::infinity();
  std::array<double, 2> best_point = hull.front();
  auto consider = [&](const std::array<double, 2>& p) {
    const double g = gap(p);
    if (g > best) {
      best = g;
      best_point = p;
    }
  };
  for (const auto& p : hull) consider(p);
  // On a segment the min of two linear functions peaks where they cross.
  for (std::size_t i = 0; i < hull.size(); ++i) {
    for (std::size_t j = i + 1; j < hull.size(); ++j) {
      const auto& u = hull[i];
      const auto& v = hull[j];
      const double dx = v[0] - u[0];
      const double dy = v[1] - u[1];
      if (dx == dy) continue;
      const double lambda = ((u[1] - target[1]) - (u[0] - target[0])) / (dx - dy);
      if (lambda > 0.0 && lambda < 1.0)
        consider({u[0] + lambda * dx, u[1] + lambda * dy});
    }
  }
  return {best, best_point};
}

ParetoVerdict verify_pareto(const ProblemSet& problems, std::span<const double> candidate,
                            std::uint64_t cap) {
  problems.require_compatible();
  const int k = problems.size();
  if (static_cast<int>(candidate.size()) != k)
    throw std::invalid_argument("candidate payoff must have one entry per principal");
  const PayoffTable payoffs = brute_force_payoffs(problems, cap);
  const double eps = kProbTolerance;

  ParetoVerdict verdict;
  if (k == 2) {
    std::vector<std::array<double, 2>> points;
    points.reserve(payoffs.num_policies);
    for (std::uint64_t i = 0; i < payoffs.num_policies; ++i) {
      const auto r = payoffs.row(i);
      points.push_back({r[0], r[1]});
    }
    const auto hull = convex_hull_2d(std::move(points));

    // A hull point improving both coordinates beyond tolerance dominates.
    const auto [gap, best] =
        max_min_gap_over_hull(hull, {candidate[0], candidate[1]});
    if (gap > eps) {
      verdict.pareto_optimal = false;
      verdict.witness = {best[0], best[1]};
      verdict.detail = "dominated by a point of the policy payoff polytope";
      return verdict;
    }
    // Ties: a hull vertex that matches one coordinate (within tolerance) and
    // clearly beats the other. Restricting to vertices keeps the tolerance
    // from being amplified along steep hull edges.
    for (const auto& v : hull) {
      const bool not_worse = v[0] >= candidate[0] - eps && v[1] >= candidate[1] - eps;
      const bool better = v[0] > candidate[0] + eps || v[1] > candidate[1] + eps;
      if (not_worse && better) {
        verdict.pareto_optimal = false;
        verdict.witness = {v[0], v[1]};
        verdict.detail = "dominated by a vertex of the policy payoff polytope";
        return verdict;
      }
    }
    verdict.pareto_optimal = true;
    verdict.detail = "no point of the policy payoff polytope dominates the candidate";
    return verdict;
  }

  // For k != 2 only deterministic policies (polytope vertices) are checked.
  for (std::uint64_t i = 0; i < payoffs.num_policies; ++i) {
    const auto row = payoffs.row(i);
    bool not_worse = true;
    bool better = false;
    for (int j = 0; j < k; ++j) {
      if (row[j] < candidate[j] - eps) not_worse = false;
      if (row[j] > candidate[j] + eps) better = true;
    }
    if (not_worse && better) {
      verdict.pareto_optimal = false;
      verdict.witness.assign(row.begin(), row.end());
      verdict.detail = "dominated by deterministic policy #" + std::to_string(i);
      return verdict;
    }
  }
  verdict.pareto_optimal = true;
  verdict.detail = "no deterministic policy dominates the candidate (vertex check only)";
  return verdict;
}

Prop1Report prop1_verify(const ProblemSet& problems, std::span<const double> target,
                         int r_grid, std::uint64_t cap) {
  problems.require_compatible();
  if (problems.size() != 2)
    throw std::invalid_argument("prop1_verify requires exactly two principals");
  if (problems.horizon() != 1)
    throw std::invalid_argument("prop1_verify requires horizon 1");
  if (target.size() != 2) throw std::invalid_argument("target must have two entries");
  if (r_grid < 2) throw std::invalid_argument("r_grid must be >= 2");
  (void)cap;

  const int no = static_cast<int>(problems.observation_labels().size());
  const int na = static_cast<int>(problems.action_labels().size());

  // Unnormalized and normalized conditional values per principal.
  std::vector<OutcomeTable> tables;
  for (const auto& pomdp : problems.principals) tables.push_back(build_outcome_table(pomdp));
  std::vector<std::vector<double>> likelihood(2, std::vector<double>(no, 0.0));
  for (int j = 0; j < 2; ++j) {
    const auto& pomdp = problems.principals[j];
    for (int o = 0; o < no; ++o)
      for (int s = 0; s < pomdp.num_states(); ++s)
        likelihood[j][o] += pomdp.prior[s] * pomdp.observation[s][o];
  }
  // conditional[j][o][a]
  std::vector<std::vector<std::vector<double>>> conditional(
      2, std::vector<std::vector<double>>(no, std::vector<double>(na, 0.0)));
  for (int j = 0; j < 2; ++j)
    for (int o = 0; o < no; ++o)
      for (int a = 0; a < na; ++a)
        conditional[j][o][a] =
            likelihood[j][o] > 0.0 ? tables[j].at(o, a) / likelihood[j][o] : 0.0;

  // Grid of r values: uniform grid, canonical breakpoints, and every exact
  // crossing of two actions' objectives at some observation.
  std::vector<double> grid;
  for (int g = 0; g < r_grid; ++g) grid.push_back(static_cast<double>(g) / (r_grid - 1));
  for (double r : {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0}) grid.push_back(r);
  for (int o = 0; o < no; ++o) {
    for (int a = 0; a < na; ++a) {
      for (int b = a + 1; b < na; ++b) {
        const double d1 = conditional[0][o][a] - conditional[0][o][b];
        const double d2 = conditional[1][o][a] - conditional[1][o][b];
        if (d1 == d2) continue;
        const double r = d2 / (d2 - d1);
        if (r >= 0.0 && r <= 1.0) grid.push_back(r);
      }
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  Prop1Report report;
  report.target.assign(target.begin(), target.end());
  std::vector<std::vector<int>> previous_profile;
  for (double r : grid) {
    Prop1Entry entry;
    entry.r = r;
    entry.argmax_actions.resize(no);
    for (int o = 0; o < no; ++o) {
      std::vector<double> scores(na, 0.0);
      for (int a = 0; a < na; ++a)
        scores[a] = r * conditional[0][o][a] + (1.0 - r) * conditional[1][o][a];
      entry.argmax_actions[o] = argmax_set(scores, kTieTolerance);
    }

    // Every pure per-observation selection among the maximizers.
    std::vector<int> pick(no, 0);
    bool more = true;
    while (more) {
      std::vector<double> payoff(2, 0.0);
      for (int o = 0; o < no; ++o) {
        const int a = entry.argmax_actions[o][pick[o]];
        payoff[0] += tables[0].at(o, a);
        payoff[1] += tables[1].at(o, a);
      }
      entry.selection_payoffs.push_back(std::move(payoff));
      more = false;
      for (int o = no - 1; o >= 0; --o) {
        if (++pick[o] < static_cast<int>(entry.argmax_actions[o].size())) {
          more = true;
          break;
        }
        pick[o] = 0;
      }
    }

    std::vector<std::array<double, 2>> points;
    points.reserve(entry.selection_payoffs.size());
    for (const auto& p : entry.selection_payoffs) points.push_back({p[0], p[1]});
    const auto [gap, best] = max_min_gap_over_hull(points, {target[0], target[1]});
    entry.best_gap = gap;
    entry.best_payoff = {best[0], best[1]};
    entry.achieves_target = gap >= -kProbTolerance;

    if (!previous_profile.empty() && entry.argmax_actions != previous_profile)
      report.change_points.push_back(r);
    previous_profile = entry.argmax_actions;
    report.entries.push_back(std::move(entry));
  }

  report.impossibility_confirmed =
      std::none_of(report.entries.begin(), report.entries.end(),
                   [](const Prop1Entry& e) { return e.achieves_target; });
  return report;
}

}  // namespace mpp
