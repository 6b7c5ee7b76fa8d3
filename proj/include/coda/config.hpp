#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "coda/analysis.hpp"
#include "coda/dynamics.hpp"
#include "coda/graph.hpp"
#include "coda/sweep.hpp"

namespace coda {

enum class Command { simulate, sweep, gallery, clusters, classify };

std::string_view command_name(Command command) noexcept;

// Fully resolved run description. Paths are absolute; the random-graph and
// random-initial-state seeds always equal `seed`.
struct RunConfig {
  Command command = Command::simulate;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;

  GraphSpec graph;
  ModelParams params;
  InitialSpec initial;
  std::filesystem::path initial_path;  // source of explicit opinions

  // simulate, clusters
  std::uint64_t steps = 0;
  std::uint64_t stride = 1;

  // sweep (grid over `swept`), gallery (grid holds the betas)
  SweptParam swept = SweptParam::beta;
  std::vector<double> grid;
  std::uint64_t transient = 10'000;
  std::size_t tail = 1'024;

  // sweep, gallery, classify
  ClassifyOptions classify;

  // classify
  std::filesystem::path input;
  std::uint64_t skip = 0;  // leading snapshots dropped before classification

  void set_seed(std::uint64_t value) noexcept;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Flat INI-style document:
//
//   command = sweep          # simulate | sweep | gallery | clusters | classify
//   seed = 7
//   output = out
//   [graph]    kind = complete|lattice|random|file, n, side, edge_prob, path
//   [params]   beta, gamma, e_min, e_max, p_bar
//   [initial]  kind = fs|random|file, theta0, path, p0, allow_extreme
//   [simulate] / [clusters]  steps, stride
//   [sweep]    param = beta|gamma|p_bar, grid = a:b:step | v1,v2,..., transient,
//              tail, tol, max_period
//   [gallery]  betas = v1,v2,..., transient, tail, tol, max_period
//   [classify] input, skip, tol, max_period
//
// Relative paths resolve against `base_dir` (the config file's directory).
// Unknown sections or keys, keys that do not apply to the chosen command or
// kind, and invariant violations all throw ConfigError.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

// Inverse of parse_config: parse_config(render_config(c)) == c.
std::string render_config(const RunConfig& config);

// Throws ConfigError on any inconsistency; parse_config calls it.
void validate_config(const RunConfig& config);

SweepSpec make_sweep_spec(const RunConfig& config);

std::vector<double> read_opinion_file(const std::filesystem::path& path);

}  // namespace coda
