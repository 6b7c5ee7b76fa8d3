#include "coda/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "coda/errors.hpp"
#include "coda/rng.hpp"

namespace coda {

namespace {

std::string fmt(double x) { return std::to_string(x); }

}  // namespace

void ModelParams::validate() const {
  if (!std::isfinite(beta) || beta < 0.0 || beta > 1.0) {
    throw ConfigError("beta must lie in [0,1], got " + fmt(beta));
  }
  if (!std::isfinite(gamma) || gamma <= 0.0 || gamma >= 1.0) {
    throw ConfigError("gamma must lie in (0,1), got " + fmt(gamma));
  }
  if (!std::isfinite(e_min) || !std::isfinite(e_max)) {
    throw ConfigError("e_min and e_max must be finite");
  }
  if (e_min > e_max) {
    throw ConfigError("e_min must not exceed e_max, got e_min=" + fmt(e_min) +
                      " e_max=" + fmt(e_max));
  }
  if (!std::isfinite(p_bar)) throw ConfigError("p_bar must be finite");
}

SimState make_state(std::vector<double> opinions, double pollution, double p_bar) {
  SimState s;
  s.actions.reserve(opinions.size());
  for (std::size_t i = 0; i < opinions.size(); ++i) {
    if (opinions[i] == 0.0) {
      throw PreconditionError("agent " + std::to_string(i) +
                              " starts at opinion 0; its initial action is undefined");
    }
    s.actions.push_back(sign_action(opinions[i]));
  }
  if (pollution == p_bar) {
    throw PreconditionError("initial pollution equals the threshold p_bar");
  }
  s.opinions = std::move(opinions);
  s.pollution = pollution;
  s.q_p = pollution > p_bar ? Action::negative : Action::positive;
  return s;
}

Action quantize_opinion(double theta, Action prev_action) noexcept {
  if (theta > 0.0) return Action::positive;
  if (theta < 0.0) return Action::negative;
  return prev_action;
}

Action quantize_pollution(double p, double p_bar, Action prev_qp) noexcept {
  if (p > p_bar) return Action::negative;
  if (p < p_bar) return Action::positive;
  return prev_qp;
}

std::vector<double> emissions(std::span<const Action> actions, const ModelParams& params) {
  std::vector<double> out;
  out.reserve(actions.size());
  for (Action a : actions) out.push_back(a == Action::positive ? params.e_max : params.e_min);
  return out;
}

double total_emission(std::span<const Action> actions, const ModelParams& params) noexcept {
  double sum = 0.0;
  for (Action a : actions) sum += a == Action::positive ? params.e_max : params.e_min;
  return sum;
}

double step_pollution(double p, double total_emission, double gamma) noexcept {
  return gamma * p + total_emission;
}

double local_field(AgentId i, std::span<const Action> actions, Action q_p,
                   const Graph& graph, double beta) noexcept {
  const auto row = graph.neighbors(i);
  long positives = 0;
  for (AgentId j : row) positives += actions[j] == Action::positive;
  const long n = static_cast<long>(row.size());
  const double balance = static_cast<double>(2 * positives - n) / static_cast<double>(n);
  return (1.0 - beta) * balance + beta * to_int(q_p);
}

std::vector<double> local_fields(const SimState& state, const Graph& graph, double beta) {
  std::vector<double> f(state.size());
  for (AgentId i = 0; i < f.size(); ++i) {
    f[i] = local_field(i, state.actions, state.q_p, graph, beta);
  }
  return f;
}

double step_opinion(double theta, double f) noexcept {
  const double next = theta + (1.0 - theta * theta) * (f - theta);
  return std::clamp(next, std::min(theta, f), std::max(theta, f));
}

void step_into(const SimState& from, SimState& to, const Graph& graph,
               const ModelParams& params) {
  const std::size_t n = from.size();
  if (graph.size() != n || from.actions.size() != n) {
    throw ConfigError("state has " + std::to_string(n) + " opinions and " +
                      std::to_string(from.actions.size()) + " actions but graph has " +
                      std::to_string(graph.size()) + " agents");
  }

  // q(k), q_p(k) from tick-k values and memories.
  to.actions.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    to.actions[i] = quantize_opinion(from.opinions[i], from.actions[i]);
  }
  const Action q_p = quantize_pollution(from.pollution, params.p_bar, from.q_p);

  to.opinions.resize(n);
  for (AgentId i = 0; i < n; ++i) {
    const double f = local_field(i, to.actions, q_p, graph, params.beta);
    to.opinions[i] = step_opinion(from.opinions[i], f);
  }
  to.pollution = step_pollution(from.pollution, total_emission(to.actions, params), params.gamma);

  // q(k+1), q_p(k+1), with q(k), q_p(k) as tie memory.
  for (std::size_t i = 0; i < n; ++i) {
    to.actions[i] = quantize_opinion(to.opinions[i], to.actions[i]);
  }
  to.q_p = quantize_pollution(to.pollution, params.p_bar, q_p);
  to.tick = from.tick + 1;
}

SimState step(const SimState& state, const Graph& graph, const ModelParams& params) {
  SimState next;
  step_into(state, next, graph, params);
  return next;
}

void advance(SimState& state, const Graph& graph, const ModelParams& params,
             std::uint64_t n_steps) {
  SimState other = state;
  for (std::uint64_t k = 0; k < n_steps; ++k) {
    step_into(state, other, graph, params);
    std::swap(state, other);
  }
}

void check_initial_state(const SimState& state, const ModelParams& params,
                         const SimulateOptions& options) {
  if (state.actions.size() != state.opinions.size()) {
    throw ConfigError("state has mismatched opinion and action counts");
  }
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double theta = state.opinions[i];
    const bool interior = theta > -1.0 && theta < 1.0 && theta != 0.0;
    const bool extreme = theta == -1.0 || theta == 1.0;
    if (!interior && !(extreme && options.allow_extreme_opinions)) {
      throw PreconditionError("agent " + std::to_string(i) + " has initial opinion " +
                              fmt(theta) + "; need theta in (-1,1) \\ {0}");
    }
    if (state.actions[i] != sign_action(theta)) {
      throw PreconditionError("agent " + std::to_string(i) +
                              " has an action inconsistent with its opinion sign");
    }
  }
  if (!std::isfinite(state.pollution)) throw PreconditionError("initial pollution is not finite");
  if (state.pollution == params.p_bar) {
    throw PreconditionError("initial pollution equals the threshold p_bar = " + fmt(params.p_bar));
  }
  if (state.q_p != quantize_pollution(state.pollution, params.p_bar, state.q_p)) {
    throw PreconditionError("initial q_p is inconsistent with the pollution level");
  }
}

Trajectory simulate(const SimState& initial, const Graph& graph, const ModelParams& params,
                    std::uint64_t n_steps, std::uint64_t stride,
                    const SimulateOptions& options) {
  params.validate();
  if (stride == 0) throw ConfigError("stride must be positive");
  if (n_steps % stride != 0) {
    throw ConfigError("steps (" + std::to_string(n_steps) + ") must be a multiple of stride (" +
                      std::to_string(stride) + ")");
  }
  if (initial.size() != graph.size()) {
    throw ConfigError("initial state has " + std::to_string(initial.size()) +
                      " agents but graph has " + std::to_string(graph.size()));
  }
  check_initial_state(initial, params, options);

  Trajectory traj;
  traj.params = params;
  traj.graph_id = graph.label();
  traj.stride = stride;
  traj.snapshots.reserve(n_steps / stride + 1);
  traj.snapshots.push_back(initial);

  SimState current = initial;
  SimState scratch = initial;
  for (std::uint64_t k = 1; k <= n_steps; ++k) {
    step_into(current, scratch, graph, params);
    std::swap(current, scratch);
    if (k % stride == 0) traj.snapshots.push_back(current);
  }
  return traj;
}

std::vector<double> random_opinions(std::size_t n, std::uint64_t seed) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::uint64_t attempt = 0;; ++attempt) {
      const double u = rng::to_unit(rng::draw(seed, rng::Stream::initial_opinions, i, attempt));
      const double theta = 2.0 * u - 1.0;
      if (theta != 0.0 && theta != -1.0) {
        out[i] = theta;
        break;
      }
    }
  }
  return out;
}

SimState make_initial_state(const InitialSpec& spec, std::size_t n_agents, double p_bar) {
  std::vector<double> opinions;
  switch (spec.kind) {
    case InitialSpec::Kind::fs:
      opinions.assign(n_agents, spec.theta0);
      break;
    case InitialSpec::Kind::random:
      opinions = random_opinions(n_agents, spec.seed);
      break;
    case InitialSpec::Kind::explicit_values:
      if (spec.opinions.size() != n_agents) {
        throw ConfigError("explicit initial opinions list " + std::to_string(spec.opinions.size()) +
                          " values for " + std::to_string(n_agents) + " agents");
      }
      opinions = spec.opinions;
      break;
  }
  return make_state(std::move(opinions), spec.p0, p_bar);
}

}  // namespace coda
