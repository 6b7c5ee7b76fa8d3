#include "coda/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <ostream>
#include <sstream>

#include "coda/analysis.hpp"
#include "coda/csv.hpp"
#include "coda/errors.hpp"

namespace coda {

namespace fs = std::filesystem;

namespace {

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& content) {
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
  return path;
}

template <class Writer>
std::string render(Writer&& writer) {
  std::ostringstream os;
  writer(os);
  return os.str();
}

Trajectory run_simulation(const RunConfig& config, const Graph& graph) {
  const SimState initial = make_initial_state(config.initial, graph.size(), config.params.p_bar);
  return simulate(initial, graph, config.params, config.steps, config.stride,
                  {config.initial.allow_extreme});
}

}  // namespace

std::vector<fs::path> run(const RunConfig& config, const RunOptions& options, std::ostream* log) {
  validate_config(config);
  fs::create_directories(config.output_dir);
  const fs::path& dir = config.output_dir;
  std::vector<fs::path> written;

  auto emit = [&](const std::string& name, const std::string& content) {
    written.push_back(write_file(dir, name, content));
    if (log && !options.quiet) *log << "wrote " << written.back().string() << '\n';
  };

  switch (config.command) {
    case Command::simulate:
    case Command::clusters: {
      const Graph graph = build_graph(config.graph);
      const Trajectory traj = run_simulation(config, graph);
      const auto clusters = find_preserved_clusters(traj, graph, config.params.beta);
      if (config.command == Command::simulate) {
        emit("trajectory.csv", render([&](std::ostream& os) { csv::write_trajectory(os, traj); }));
      }
      emit("clusters.csv", render([&](std::ostream& os) { csv::write_clusters(os, clusters); }));
      if (config.graph.kind == GraphSpec::Kind::lattice) {
        emit("grid.csv", render([&](std::ostream& os) {
               csv::write_lattice_grid(os, traj.snapshots.back(), config.graph.size, clusters);
             }));
      }
      break;
    }
    case Command::sweep: {
      const auto rows = run_sweep(make_sweep_spec(config), options.threads);
      emit("bifurcation.csv", render([&](std::ostream& os) { csv::write_bifurcation(os, rows); }));
      break;
    }
    case Command::gallery: {
      const auto entries = attractor_gallery(config.grid, make_sweep_spec(config), options.threads);
      const bool fs_start = config.initial.kind == InitialSpec::Kind::fs;
      emit("gallery.csv",
           render([&](std::ostream& os) { csv::write_gallery(os, entries, fs_start); }));
      break;
    }
    case Command::classify: {
      std::ifstream in(config.input, std::ios::binary);
      if (!in) throw ConfigError("cannot open trajectory '" + config.input.string() + "'");
      const auto states = csv::read_trajectory(in);
      if (config.skip > states.size()) {
        throw InsufficientDataError("skip exceeds the number of recorded snapshots");
      }
      std::vector<StateSample> tail;
      for (std::size_t k = config.skip; k < states.size(); ++k) tail.push_back(sample_of(states[k]));
      const auto attractor = classify_attractor(tail, config.classify);
      std::string text = "class,period,samples\n";
      text += class_name(attractor);
      text += ',';
      if (std::holds_alternative<LimitCycle>(attractor)) text += std::to_string(period_of(attractor));
      text += ',' + std::to_string(tail.size()) + '\n';
      emit("classification.csv", text);
      break;
    }
  }
  emit("manifest.ini", render_config(config));
  return written;
}

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coupled opinion/pollution simulator and analysis toolkit", "coda"};
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  unsigned threads = 1;
  bool quiet = false;
  app.add_option("--config", config_path, "Run configuration file")->required();
  auto* seed_opt = app.add_option("--seed", seed, "Override the configured seed");
  auto* out_opt = app.add_option("--out", out_dir, "Override the output directory");
  app.add_option("--threads", threads, "Worker threads for sweep and gallery")
      ->check(CLI::PositiveNumber);
  app.add_flag("--quiet", quiet, "Suppress progress messages");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  if (!argv.empty()) argv.pop_back();  // program name
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    RunConfig config = load_config(config_path);
    if (*seed_opt) config.set_seed(seed);
    if (*out_opt) {
      fs::path p = fs::absolute(out_dir).lexically_normal();
      if (!p.has_filename() && p.has_relative_path()) p = p.parent_path();
      config.output_dir = p;
    }
    run(config, {threads, quiet}, &err);
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const PreconditionError& e) {
    err << "precondition error: " << e.what() << '\n';
    return 1;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace coda
