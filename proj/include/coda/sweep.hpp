#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "coda/analysis.hpp"
#include "coda/dynamics.hpp"
#include "coda/graph.hpp"

namespace coda {

enum class SweptParam { beta, gamma, p_bar };

std::string_view param_name(SweptParam param) noexcept;
ModelParams with_param(ModelParams params, SweptParam param, double value) noexcept;

struct SweepSpec {
  ModelParams base_params;
  SweptParam swept = SweptParam::beta;
  std::vector<double> grid;  // strictly increasing
  InitialSpec initial;
  GraphSpec graph;
  std::uint64_t transient = 10'000;
  std::size_t tail = 1'024;
  ClassifyOptions classify;

  // Throws ConfigError naming the first offending grid value or field.
  void validate() const;
};

// One bifurcation column. Under FS starts the theta samples are agent 0's
// opinion (all agents agree); otherwise they are the population mean and the
// min/max series are filled as well.
struct SweepRow {
  double param_value = 0.0;
  AttractorClass attractor;
  std::vector<double> theta_samples;
  std::vector<double> theta_min_samples;
  std::vector<double> theta_max_samples;
  std::vector<double> p_samples;
};

// 0.501, 0.502, ..., 0.999.
std::vector<double> default_beta_grid();

// Evenly spaced values start, start + step, ..., up to stop (inclusive when
// stop lies on the lattice within a relative 1e-9 of step).
std::vector<double> arithmetic_grid(double start, double stop, double step);

// Each grid point runs from the same initial state for `transient` steps, then
// records `tail` states and classifies them. Rows follow grid order and do not
// depend on `threads`.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads = 1);

struct GalleryEntry {
  double beta = 0.0;
  Trajectory trajectory;  // ticks 0 .. transient + tail - 1, stride 1
  AttractorClass attractor;
};

// Full trajectories for the given betas (swept parameter forced to beta).
std::vector<GalleryEntry> attractor_gallery(std::span<const double> betas, const SweepSpec& base,
                                            unsigned threads = 1);

}  // namespace coda
