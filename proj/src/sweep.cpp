#include "coda/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <sstream>
#include <thread>

#include "coda/errors.hpp"

namespace coda {

namespace {

std::string value_text(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Rethrows the active exception with the grid value prepended, keeping its
// category so callers can still map it to an exit status.
[[noreturn]] void rethrow_for(double value) {
  const std::string prefix = "grid value " + value_text(value) + ": ";
  try {
    throw;
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const PreconditionError& e) {
    throw PreconditionError(prefix + e.what());
  } catch (const DomainError& e) {
    throw DomainError(prefix + e.what());
  } catch (const InsufficientDataError& e) {
    throw InsufficientDataError(prefix + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(prefix + e.what());
  }
}

// Runs job(i) for i in [0, count) on up to `threads` workers. The first
// failure in index order is rethrown after all workers finish.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& job) {
  std::vector<std::exception_ptr> errors(count);
  auto run_one = [&](std::size_t i) {
    try {
      job(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) run_one(i);
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

bool is_fs(const SweepSpec& spec) { return spec.initial.kind == InitialSpec::Kind::fs; }

}  // namespace

std::string_view param_name(SweptParam param) noexcept {
  switch (param) {
    case SweptParam::beta:
      return "beta";
    case SweptParam::gamma:
      return "gamma";
    case SweptParam::p_bar:
      return "p_bar";
  }
  return "beta";
}

ModelParams with_param(ModelParams params, SweptParam param, double value) noexcept {
  switch (param) {
    case SweptParam::beta:
      params.beta = value;
      break;
    case SweptParam::gamma:
      params.gamma = value;
      break;
    case SweptParam::p_bar:
      params.p_bar = value;
      break;
  }
  return params;
}

void SweepSpec::validate() const {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw ConfigError("sweep grid must be strictly increasing at value " + value_text(grid[i]));
    }
    try {
      with_param(base_params, swept, grid[i]).validate();
    } catch (...) {
      rethrow_for(grid[i]);
    }
  }
  if (is_fs(*this) && graph.kind != GraphSpec::Kind::complete) {
    throw ConfigError("a fully synchronized initial state requires a complete graph");
  }
  if (tail == 0) throw ConfigError("sweep tail must be positive");
  if (tail < 2 * classify.max_period) {
    throw ConfigError("sweep tail (" + std::to_string(tail) +
                      ") must be at least 2*max_period (" +
                      std::to_string(2 * classify.max_period) + ")");
  }
}

std::vector<double> arithmetic_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop) || stop < start) {
    throw ConfigError("grid range needs finite start <= stop and a positive step");
  }
  const double span = (stop - start) / step;
  const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

std::vector<double> default_beta_grid() { return arithmetic_grid(0.501, 0.999, 0.001); }

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads) {
  spec.validate();
  if (spec.grid.empty()) return {};

  const Graph graph = build_graph(spec.graph);
  const bool fs = is_fs(spec);

  std::vector<SweepRow> rows(spec.grid.size());
  parallel_for(spec.grid.size(), threads, [&](std::size_t index) {
    const double value = spec.grid[index];
    try {
      const ModelParams params = with_param(spec.base_params, spec.swept, value);
      SimState state = make_initial_state(spec.initial, graph.size(), params.p_bar);
      check_initial_state(state, params, {spec.initial.allow_extreme});
      advance(state, graph, params, spec.transient);

      SweepRow row;
      row.param_value = value;
      std::vector<StateSample> tail;
      tail.reserve(spec.tail);
      SimState scratch = state;
      for (std::size_t t = 0; t < spec.tail; ++t) {
        if (t > 0) {
          step_into(state, scratch, graph, params);
          std::swap(state, scratch);
        }
        tail.push_back(sample_of(state));
        row.p_samples.push_back(state.pollution);
        if (fs) {
          row.theta_samples.push_back(state.opinions.front());
        } else {
          const auto [lo, hi] = std::minmax_element(state.opinions.begin(), state.opinions.end());
          double sum = 0.0;
          for (double theta : state.opinions) sum += theta;
          row.theta_samples.push_back(sum / static_cast<double>(state.size()));
          row.theta_min_samples.push_back(*lo);
          row.theta_max_samples.push_back(*hi);
        }
      }
      row.attractor = classify_attractor(tail, spec.classify);
      rows[index] = std::move(row);
    } catch (...) {
      rethrow_for(value);
    }
  });
  return rows;
}

std::vector<GalleryEntry> attractor_gallery(std::span<const double> betas, const SweepSpec& base,
                                            unsigned threads) {
  SweepSpec spec = base;
  spec.swept = SweptParam::beta;
  spec.grid.assign(betas.begin(), betas.end());
  std::sort(spec.grid.begin(), spec.grid.end());
  spec.validate();
  if (betas.empty()) return {};

  const Graph graph = build_graph(spec.graph);
  const std::uint64_t total = spec.transient + spec.tail;

  std::vector<GalleryEntry> entries(betas.size());
  parallel_for(betas.size(), threads, [&](std::size_t index) {
    const double beta = betas[index];
    try {
      const ModelParams params = with_param(spec.base_params, SweptParam::beta, beta);
      const SimState initial = make_initial_state(spec.initial, graph.size(), params.p_bar);
      GalleryEntry entry;
      entry.beta = beta;
      entry.trajectory =
          simulate(initial, graph, params, total - 1, 1, {spec.initial.allow_extreme});
      std::vector<StateSample> tail;
      tail.reserve(spec.tail);
      for (std::size_t k = spec.transient; k < entry.trajectory.snapshots.size(); ++k) {
        tail.push_back(sample_of(entry.trajectory.snapshots[k]));
      }
      entry.attractor = classify_attractor(tail, spec.classify);
      entries[index] = std::move(entry);
    } catch (...) {
      rethrow_for(beta);
    }
  });
  return entries;
}

}  // namespace coda
