#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "coda/graph.hpp"

namespace coda {

// Binary action exposed to neighbors (and the binary pollution signal).
enum class Action : std::int8_t { negative = -1, positive = 1 };

constexpr int to_int(Action a) noexcept { return static_cast<int>(a); }
constexpr Action sign_action(double x) noexcept {
  return x > 0.0 ? Action::positive : Action::negative;
}

struct ModelParams {
  double beta = 0.0;   // weight of the pollution signal against neighbor actions
  double gamma = 0.5;  // pollution decay, in (0, 1)
  double e_min = 0.0;  // emission of an agent playing -1
  double e_max = 1.0;  // emission of an agent playing +1
  double p_bar = 0.0;  // pollution threshold

  // Throws ConfigError naming the offending field and bound.
  void validate() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

// State at tick k. `actions` and `q_p` hold q(k) and q_p(k): they agree with
// the signs of the opinions / of (p_bar - p) wherever those are nonzero, and
// carry the previous value through exact ties.
struct SimState {
  std::vector<double> opinions;
  double pollution = 0.0;
  std::vector<Action> actions;
  Action q_p = Action::positive;
  std::uint64_t tick = 0;

  std::size_t size() const noexcept { return opinions.size(); }
  friend bool operator==(const SimState&, const SimState&) = default;
};

// Tick-0 state with memories q_i(0) = sign(theta_i(0)) and
// q_p(0) = -sign(p(0) - p_bar). Throws PreconditionError on a zero opinion or
// p(0) == p_bar, where those signs are undefined.
SimState make_state(std::vector<double> opinions, double pollution, double p_bar);

Action quantize_opinion(double theta, Action prev_action) noexcept;

// High pollution maps to -1.
Action quantize_pollution(double p, double p_bar, Action prev_qp) noexcept;

std::vector<double> emissions(std::span<const Action> actions, const ModelParams& params);

// Sum of emissions accumulated in agent order.
double total_emission(std::span<const Action> actions, const ModelParams& params) noexcept;

double step_pollution(double p, double total_emission, double gamma) noexcept;

// f_i = (1 - beta) (n_i+ - n_i-) / n_i + beta q_p.
double local_field(AgentId i, std::span<const Action> actions, Action q_p,
                   const Graph& graph, double beta) noexcept;

std::vector<double> local_fields(const SimState& state, const Graph& graph, double beta);

// theta + (1 - theta^2)(f - theta). The exact map always lands between theta
// and f; the result is clamped to that interval so rounding cannot break the
// ordering near the boundary.
double step_opinion(double theta, double f) noexcept;

// One synchronous tick. Throws ConfigError if the state and graph disagree on
// the number of agents.
SimState step(const SimState& state, const Graph& graph, const ModelParams& params);

// Allocation-free variants of step() for long runs. `to` must not alias `from`.
void step_into(const SimState& from, SimState& to, const Graph& graph,
               const ModelParams& params);
void advance(SimState& state, const Graph& graph, const ModelParams& params,
             std::uint64_t n_steps);

struct Trajectory {
  ModelParams params;
  std::string graph_id;
  std::uint64_t stride = 1;
  std::vector<SimState> snapshots;
};

struct SimulateOptions {
  // Admit initial opinions at exactly -1 or 1 (they stay frozen).
  bool allow_extreme_opinions = false;
};

// Throws PreconditionError naming the first offending agent, or the pollution
// tie, if the tick-0 state is outside the admissible set.
void check_initial_state(const SimState& state, const ModelParams& params,
                         const SimulateOptions& options = {});

// Records ticks 0, stride, 2 stride, ..., n_steps. n_steps must be a multiple
// of stride.
Trajectory simulate(const SimState& initial, const Graph& graph, const ModelParams& params,
                    std::uint64_t n_steps, std::uint64_t stride,
                    const SimulateOptions& options = {});

// Initial conditions.
struct InitialSpec {
  enum class Kind { fs, random, explicit_values };

  Kind kind = Kind::fs;
  double theta0 = 0.0;           // fs
  std::uint64_t seed = 0;        // random
  std::vector<double> opinions;  // explicit_values
  double p0 = 0.0;
  bool allow_extreme = false;

  friend bool operator==(const InitialSpec&, const InitialSpec&) = default;
};

// i.i.d. uniform on (-1, 1), exact zeros (and -1) redrawn. Draw i depends only
// on (seed, i).
std::vector<double> random_opinions(std::size_t n, std::uint64_t seed);

SimState make_initial_state(const InitialSpec& spec, std::size_t n_agents, double p_bar);

}  // namespace coda
