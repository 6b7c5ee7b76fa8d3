#include "coda/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "coda/errors.hpp"

namespace coda {

double predicted_opinion_limit(std::size_t n_plus_star, std::size_t n_i, Action q_p_star,
                               double beta) {
  if (n_i == 0 || n_plus_star > n_i) {
    throw DomainError("need 0 <= n_plus <= n_i and n_i >= 1");
  }
  const double balance = (2.0 * static_cast<double>(n_plus_star) - static_cast<double>(n_i)) /
                         static_cast<double>(n_i);
  return (1.0 - beta) * balance + beta * to_int(q_p_star);
}

double pollution_equilibrium(std::size_t n_plus, std::size_t n_minus, const ModelParams& params) {
  return (static_cast<double>(n_plus) * params.e_max + static_cast<double>(n_minus) * params.e_min) /
         (1.0 - params.gamma);
}

PollutionCorridor pollution_corridor(std::size_t n_agents, const ModelParams& params) {
  return {pollution_equilibrium(0, n_agents, params), pollution_equilibrium(n_agents, 0, params)};
}

bool qp_stationarity_certificate(double p_k, const ModelParams& params, std::size_t n_agents) {
  const auto [p_min, p_max] = pollution_corridor(n_agents, params);
  return (p_k <= p_max && p_max <= params.p_bar) || (p_k >= p_min && p_min >= params.p_bar);
}

int refined_field_sign(std::size_t n_plus, std::size_t n_minus, Action q_p, double beta) {
  const std::size_t n_i = n_plus + n_minus;
  if (n_i == 0) throw DomainError("agent needs at least one neighbor");
  if (!(beta >= 0.0 && beta < 1.0 / (1.0 + static_cast<double>(n_i)))) {
    throw DomainError("refined sign test needs beta < 1/(1+n_i) = " +
                      std::to_string(1.0 / (1.0 + static_cast<double>(n_i))));
  }
  const double value = static_cast<double>(n_plus) - static_cast<double>(n_minus) +
                       static_cast<double>(n_i) * beta * to_int(q_p) / (1.0 - beta);
  return (value > 0.0) - (value < 0.0);
}

ClusterReport certify_cluster(std::span<const AgentId> members, const Graph& graph,
                              std::span<const Action> actions_at_0, double beta) {
  if (members.empty()) throw ConfigError("cluster must have at least one member");
  if (actions_at_0.size() != graph.size()) {
    throw ConfigError("action vector size does not match the graph");
  }
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("beta must lie in [0,1]");

  ClusterReport report;
  report.members.assign(members.begin(), members.end());
  std::sort(report.members.begin(), report.members.end());
  report.members.erase(std::unique(report.members.begin(), report.members.end()),
                       report.members.end());
  if (report.members.back() >= graph.size()) {
    throw ConfigError("cluster member " + std::to_string(report.members.back()) +
                      " is not an agent of the graph");
  }

  std::vector<bool> in_cluster(graph.size(), false);
  for (AgentId i : report.members) in_cluster[i] = true;

  const Action first = actions_at_0[report.members.front()];
  const bool same_action = std::all_of(report.members.begin(), report.members.end(),
                                       [&](AgentId i) { return actions_at_0[i] == first; });
  if (same_action) report.action = first;

  constexpr double inf = std::numeric_limits<double>::infinity();
  const double margin_rate = beta < 1.0 ? beta / (1.0 - beta) : inf;

  std::vector<ClusterViolation> weak_fail, strong_fail;
  report.worst_weak_slack = inf;
  report.worst_strong_slack = inf;
  for (AgentId i : report.members) {
    const auto row = graph.neighbors(i);
    const auto inside = static_cast<std::size_t>(
        std::count_if(row.begin(), row.end(), [&](AgentId j) { return in_cluster[j]; }));
    const std::size_t outside = row.size() - inside;
    const double balance = static_cast<double>(inside) - static_cast<double>(outside);
    double weak, strong;
    if (beta < 1.0) {
      const double margin = margin_rate * static_cast<double>(row.size());
      weak = balance + margin;
      strong = balance - margin;
    } else {
      weak = inf;
      strong = -inf;
    }
    report.worst_weak_slack = std::min(report.worst_weak_slack, weak);
    report.worst_strong_slack = std::min(report.worst_strong_slack, strong);
    if (weak < 0.0) weak_fail.push_back({i, inside, outside, weak});
    if (strong < 0.0) strong_fail.push_back({i, inside, outside, strong});
  }

  report.weakly_robust = same_action && weak_fail.empty();
  report.strongly_robust = same_action && strong_fail.empty();

  auto& violations = weak_fail.empty() ? strong_fail : weak_fail;
  std::stable_sort(violations.begin(), violations.end(),
                   [](const ClusterViolation& a, const ClusterViolation& b) {
                     return a.slack < b.slack;
                   });
  if (violations.size() > ClusterReport::max_reported_violations) {
    violations.resize(ClusterReport::max_reported_violations);
  }
  report.violations = std::move(violations);
  return report;
}

std::vector<std::vector<AgentId>> same_action_components(const Graph& graph,
                                                         std::span<const Action> actions,
                                                         const std::vector<bool>& eligible) {
  const std::size_t n = graph.size();
  if (actions.size() != n || eligible.size() != n) {
    throw ConfigError("action/eligibility vectors do not match the graph");
  }

  // Out-neighborhoods, needed to walk arcs backwards on directed graphs.
  std::vector<std::vector<AgentId>> reverse;
  if (graph.directed()) {
    reverse.resize(n);
    for (AgentId i = 0; i < n; ++i) {
      for (AgentId j : graph.neighbors(i)) reverse[j].push_back(i);
    }
  }

  std::vector<std::vector<AgentId>> components;
  std::vector<bool> seen(n, false);
  std::vector<AgentId> stack;
  for (AgentId start = 0; start < n; ++start) {
    if (!eligible[start] || seen[start]) continue;
    std::vector<AgentId> component;
    seen[start] = true;
    stack.push_back(start);
    auto visit = [&](AgentId j) {
      if (eligible[j] && !seen[j] && actions[j] == actions[start]) {
        seen[j] = true;
        stack.push_back(j);
      }
    };
    while (!stack.empty()) {
      const AgentId i = stack.back();
      stack.pop_back();
      component.push_back(i);
      for (AgentId j : graph.neighbors(i)) visit(j);
      if (graph.directed()) {
        for (AgentId j : reverse[i]) visit(j);
      }
    }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  return components;
}

std::vector<ClusterReport> find_preserved_clusters(const Trajectory& trajectory,
                                                   const Graph& graph, double beta) {
  if (trajectory.snapshots.empty()) throw ConfigError("trajectory has no snapshots");
  const auto& first = trajectory.snapshots.front().actions;
  if (first.size() != graph.size()) throw ConfigError("trajectory does not match the graph");

  std::vector<bool> constant(graph.size(), true);
  for (const auto& snap : trajectory.snapshots) {
    for (std::size_t i = 0; i < graph.size(); ++i) {
      if (snap.actions[i] != first[i]) constant[i] = false;
    }
  }
  std::vector<ClusterReport> reports;
  for (const auto& component : same_action_components(graph, first, constant)) {
    reports.push_back(certify_cluster(component, graph, first, beta));
  }
  return reports;
}

std::vector<ActionSpacePoint> fs_action_equilibria(const ModelParams& params,
                                                   std::size_t n_agents) {
  const auto [p_min, p_max] = pollution_corridor(n_agents, params);
  std::vector<ActionSpacePoint> out;
  if (p_min >= params.p_bar) out.push_back({Action::negative, Action::negative});
  if (p_max <= params.p_bar) out.push_back({Action::positive, Action::positive});
  return out;
}

std::uint64_t fs_escape_bound(double beta) {
  if (!(beta > 0.5 && beta <= 1.0)) {
    throw DomainError("escape bound needs beta in (1/2, 1], got " + std::to_string(beta));
  }
  return static_cast<std::uint64_t>(std::ceil(1.0 / (2.0 * beta - 1.0)));
}

double state_distance(const StateSample& a, const StateSample& b) noexcept {
  double d = std::abs(a.pollution - b.pollution);
  for (std::size_t i = 0; i < a.opinions.size(); ++i) {
    d = std::max(d, std::abs(a.opinions[i] - b.opinions[i]));
  }
  return d;
}

AttractorClass classify_attractor(std::span<const StateSample> tail,
                                  const ClassifyOptions& options) {
  if (!(options.tol > 0.0)) throw ConfigError("classification tolerance must be positive");
  if (options.max_period < 1) throw ConfigError("max_period must be at least 1");
  if (tail.size() < 2 * options.max_period) {
    throw InsufficientDataError("classification needs at least 2*max_period = " +
                                std::to_string(2 * options.max_period) + " samples, got " +
                                std::to_string(tail.size()));
  }
  const std::size_t dim = tail.front().opinions.size();
  for (const auto& s : tail) {
    if (s.opinions.size() != dim) throw ConfigError("tail samples have differing dimensions");
  }

  auto matches = [&](std::size_t m) {
    for (std::size_t t = 0; t + m < tail.size(); ++t) {
      if (!(state_distance(tail[t + m], tail[t]) < options.tol)) return false;
    }
    return true;
  };

  for (std::size_t m = 1; m <= options.max_period; ++m) {
    if (!matches(m)) continue;
    if (m == 1) return FixedPoint{tail.back().opinions, tail.back().pollution};
    return LimitCycle{m, {tail.end() - static_cast<std::ptrdiff_t>(m), tail.end()}};
  }

  Aperiodic result;
  const std::size_t count = std::min(tail.size(), Aperiodic::max_reservoir);
  result.samples.reserve(count);
  for (std::size_t k = 0; k < count; ++k) result.samples.push_back(tail[k * tail.size() / count]);
  return result;
}

std::string_view class_name(const AttractorClass& attractor) noexcept {
  switch (attractor.index()) {
    case 0:
      return "fixed";
    case 1:
      return "cycle";
    default:
      return "aperiodic";
  }
}

std::size_t period_of(const AttractorClass& attractor) noexcept {
  if (std::holds_alternative<FixedPoint>(attractor)) return 1;
  if (const auto* cycle = std::get_if<LimitCycle>(&attractor)) return cycle->period;
  return 0;
}

StateSample sample_of(const SimState& state) { return {state.opinions, state.pollution}; }

}  // namespace coda
