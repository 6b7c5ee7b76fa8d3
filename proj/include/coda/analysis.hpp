#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "coda/dynamics.hpp"
#include "coda/graph.hpp"

namespace coda {

// ---------------------------------------------------------------------------
// Closed-form limits

// Opinion limit of an agent whose positive-neighbor count and pollution signal
// have become stationary: (1 - beta)(2 n+ - n) / n + beta q_p.
double predicted_opinion_limit(std::size_t n_plus_star, std::size_t n_i, Action q_p_star,
                               double beta);

// Pollution fixed point for a frozen action partition:
// (n+ e_max + n- e_min) / (1 - gamma).
double pollution_equilibrium(std::size_t n_plus, std::size_t n_minus, const ModelParams& params);

// Equilibria under unanimous -1 (p_min) and unanimous +1 (p_max).
struct PollutionCorridor {
  double p_min;
  double p_max;
};
PollutionCorridor pollution_corridor(std::size_t n_agents, const ModelParams& params);

// Sufficient condition for q_p to be stationary from tick k on, for any graph
// with n_agents agents:
//   (p_k <= p_max and p_max <= p_bar) or (p_k >= p_min and p_min >= p_bar).
bool qp_stationarity_certificate(double p_k, const ModelParams& params, std::size_t n_agents);

// sign(n+ - n- + n beta q_p / (1 - beta)), which equals sign(f_i) whenever
// beta < 1 / (1 + n_i). Throws DomainError outside that range.
int refined_field_sign(std::size_t n_plus, std::size_t n_minus, Action q_p, double beta);

// ---------------------------------------------------------------------------
// Robust polarized clusters

struct ClusterViolation {
  AgentId agent;
  std::size_t inside;   // |N_i ∩ A|
  std::size_t outside;  // |N_i \ A|
  double slack;         // margin of the failed inequality (negative)
};

struct ClusterReport {
  std::vector<AgentId> members;       // sorted
  std::optional<Action> action;       // empty when initial actions are mixed
  bool weakly_robust = false;
  bool strongly_robust = false;
  // Minimum over members of |N_i ∩ A| - |N_i \ A| ± beta/(1-beta) |N_i|.
  double worst_weak_slack = 0.0;
  double worst_strong_slack = 0.0;
  // Members failing the weak condition, or the strong one if the weak holds;
  // worst first, at most max_reported_violations entries.
  std::vector<ClusterViolation> violations;

  bool mixed_actions() const noexcept { return !action.has_value(); }

  static constexpr std::size_t max_reported_violations = 16;
};

// Throws ConfigError on an empty or out-of-range member set.
ClusterReport certify_cluster(std::span<const AgentId> members, const Graph& graph,
                              std::span<const Action> actions_at_0, double beta);

// Connected components (arcs taken in either direction) of the subgraph
// induced by eligible agents sharing the same action. Sorted by first member.
std::vector<std::vector<AgentId>> same_action_components(const Graph& graph,
                                                         std::span<const Action> actions,
                                                         const std::vector<bool>& eligible);

// Agents whose action is identical in every recorded snapshot, split into
// same-action components and certified against the first snapshot's actions.
std::vector<ClusterReport> find_preserved_clusters(const Trajectory& trajectory,
                                                   const Graph& graph, double beta);

// ---------------------------------------------------------------------------
// Fully synchronized populations

struct ActionSpacePoint {
  Action q;
  Action q_p;
  friend auto operator<=>(const ActionSpacePoint&, const ActionSpacePoint&) = default;
};

// Quadrants of the FS action space that are equilibria: (1,1) iff
// p_max <= p_bar, (-1,-1) iff p_min >= p_bar. The mixed quadrants are never
// equilibria when beta > 1/2.
std::vector<ActionSpacePoint> fs_action_equilibria(const ModelParams& params,
                                                   std::size_t n_agents);

// ceil(1 / (2 beta - 1)): step count of the linear-decrement argument for an
// FS population holding +1 against q_p = -1 (and the mirrored case). The
// argument treats the factor 1 - theta^2 as 1, so populations starting close
// to +1 can need more steps than this. Throws DomainError for beta <= 1/2.
std::uint64_t fs_escape_bound(double beta);

// ---------------------------------------------------------------------------
// Attractor classification

struct StateSample {
  std::vector<double> opinions;
  double pollution = 0.0;
  friend bool operator==(const StateSample&, const StateSample&) = default;
};

struct FixedPoint {
  std::vector<double> theta_star;
  double p_star = 0.0;
};
struct LimitCycle {
  std::size_t period = 0;
  std::vector<StateSample> cycle;  // `period` consecutive states from the tail end
};
struct Aperiodic {
  std::vector<StateSample> samples;  // evenly spaced, at most max_reservoir
  static constexpr std::size_t max_reservoir = 256;
};
using AttractorClass = std::variant<FixedPoint, LimitCycle, Aperiodic>;

struct ClassifyOptions {
  double tol = 1e-9;
  std::size_t max_period = 256;
  friend bool operator==(const ClassifyOptions&, const ClassifyOptions&) = default;
};

// Max-norm distance over opinions and pollution.
double state_distance(const StateSample& a, const StateSample& b) noexcept;

// Smallest m <= max_period with every pair of samples m apart closer than tol.
// m == 1 is a fixed point. Throws InsufficientDataError if the tail has fewer
// than 2 max_period samples, ConfigError on bad options.
AttractorClass classify_attractor(std::span<const StateSample> tail,
                                  const ClassifyOptions& options = {});

std::string_view class_name(const AttractorClass& attractor) noexcept;  // fixed|cycle|aperiodic
std::size_t period_of(const AttractorClass& attractor) noexcept;        // 1, m, or 0

StateSample sample_of(const SimState& state);

}  // namespace coda
