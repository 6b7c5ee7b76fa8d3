#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "coda/config.hpp"
#include "coda/errors.hpp"

using namespace coda;
namespace fs = std::filesystem;

namespace {

const char* const fs_sweep = R"(
command = sweep
seed = 3
output = out

[graph]
kind = complete
n = 20

[params]
beta = 0.5
gamma = 0.5
e_min = 0
e_max = 1
p_bar = 15

[initial]
kind = fs
theta0 = 0.1
p0 = 100

[sweep]
param = beta
grid = 0.501:0.999:0.001
)";

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

std::string message_of(const std::string& text) {
  try {
    parse_config(text, "/tmp");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "coda_config_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("reference sweep parses") {
  const RunConfig c = parse_config(fs_sweep, "/work");
  CHECK(c.command == Command::sweep);
  CHECK(c.seed == 3);
  CHECK(c.output_dir == fs::path("/work/out"));
  CHECK(c.graph.kind == GraphSpec::Kind::complete);
  CHECK(c.graph.size == 20);
  CHECK(c.params.beta == 0.5);
  CHECK(c.params.p_bar == 15.0);
  CHECK(c.initial.kind == InitialSpec::Kind::fs);
  CHECK(c.initial.theta0 == 0.1);
  CHECK(c.initial.p0 == 100.0);
  CHECK(c.grid.size() == 499);
  CHECK(c.transient == 10000);
  CHECK(c.tail == 1024);
  CHECK(c.classify.tol == 1e-9);
  CHECK(c.classify.max_period == 256);
  CHECK(c.graph.seed == 3);
  CHECK(c.initial.seed == 3);
}

TEST_CASE("parameter domain errors") {
  CHECK(message_of(replace(fs_sweep, "gamma = 0.5", "gamma = 1")).find("gamma must lie in (0,1)") !=
        std::string::npos);
  CHECK(message_of(replace(fs_sweep, "e_min = 0", "e_min = 2")).find("e_min") != std::string::npos);
  CHECK_FALSE(message_of(replace(fs_sweep, "theta0 = 0.1", "theta0 = 0")).empty());
  CHECK_FALSE(message_of(replace(fs_sweep, "theta0 = 0.1", "theta0 = 1")).empty());
  CHECK(message_of(replace(fs_sweep, "theta0 = 0.1", "theta0 = 1\nallow_extreme = true")).empty());
  CHECK_FALSE(message_of(replace(fs_sweep, "0.501:0.999:0.001", "0.5,0.4")).empty());
  CHECK_FALSE(message_of(replace(fs_sweep, "0.501:0.999:0.001", "0.5,1.5")).empty());
  CHECK_FALSE(message_of(replace(fs_sweep, "n = 20", "n = 1")).empty());
}

TEST_CASE("p0 equal to p_bar is rejected") {
  const auto msg = message_of(replace(fs_sweep, "p0 = 100", "p0 = 15"));
  CHECK(msg.find("p0") != std::string::npos);
}

TEST_CASE("strict structure") {
  CHECK(message_of(replace(fs_sweep, "n = 20", "n = 20\nsize = 3")).find("size") !=
        std::string::npos);
  CHECK(message_of(replace(fs_sweep, "[params]", "[extras]\nx = 1\n[params]"))
            .find("unknown section") != std::string::npos);
  CHECK(message_of(replace(fs_sweep, "n = 20", "n = 20\nn = 21")).find("duplicate") !=
        std::string::npos);
  CHECK(message_of(std::string(fs_sweep) + "\n[simulate]\nsteps = 5\n").find("does not apply") !=
        std::string::npos);
  CHECK(message_of(replace(fs_sweep, "beta = 0.5\n", "")).find("beta") != std::string::npos);
  CHECK(message_of(replace(fs_sweep, "n = 20", "n = twenty")).find("integer") != std::string::npos);
  CHECK(message_of(replace(fs_sweep, "kind = complete", "kind = ring")).find("ring") !=
        std::string::npos);
  CHECK(message_of(replace(fs_sweep, "command = sweep", "command = dance")).find("dance") !=
        std::string::npos);
  CHECK_FALSE(message_of(replace(fs_sweep, "theta0 = 0.1", "theta0 = 0.1\nseed = 4")).empty());
  CHECK_FALSE(message_of(replace(fs_sweep, "grid = 0.501:0.999:0.001", "grid = 0.5:0.6")).empty());
  // FS starts need the complete graph.
  CHECK_FALSE(message_of(replace(fs_sweep, "kind = complete\nn = 20", "kind = lattice\nside = 4"))
                  .empty());
}

TEST_CASE("empty grid and explicit lists") {
  CHECK(parse_config(replace(fs_sweep, "0.501:0.999:0.001", ""), "/w").grid.empty());
  CHECK(parse_config(replace(fs_sweep, "0.501:0.999:0.001", "0.6, 0.7"), "/w").grid ==
        std::vector<double>{0.6, 0.7});
}

TEST_CASE("file inputs resolve against the config directory") {
  const fs::path dir = scratch_dir();
  {
    std::ofstream(dir / "ops.txt") << "# opinions\n0.5\n-0.25\n0.75\n";
    std::ofstream(dir / "g.edges") << "N 3 directed=0\n0 1\n1 2\n";
  }
  const std::string text = R"(
command = simulate
[graph]
kind = file
path = g.edges
[params]
beta = 0.2
gamma = 0.5
e_min = 0
e_max = 1
p_bar = 1
[initial]
kind = file
path = ops.txt
p0 = 0
[simulate]
steps = 10
stride = 5
)";
  const RunConfig c = parse_config(text, dir);
  CHECK(c.graph.path == dir / "g.edges");
  CHECK(c.initial.opinions == std::vector<double>{0.5, -0.25, 0.75});
  CHECK(c.output_dir == dir);
  CHECK_THROWS_AS(parse_config(replace(text, "stride = 5", "stride = 3"), dir), ConfigError);
  CHECK_THROWS_AS(parse_config(replace(text, "path = ops.txt", "path = nope.txt"), dir),
                  ConfigError);
}

TEST_CASE("classify configs carry no model sections") {
  const fs::path dir = scratch_dir();
  std::ofstream(dir / "traj.csv") << "tick,p\n";
  const std::string text = "command = classify\n[classify]\ninput = traj.csv\nskip = 4\n";
  const RunConfig c = parse_config(text, dir);
  CHECK(c.input == dir / "traj.csv");
  CHECK(c.skip == 4);
  CHECK_THROWS_AS(parse_config(text + "[graph]\nkind = complete\nn = 3\n", dir), ConfigError);
}

TEST_CASE("render then parse is the identity") {
  const fs::path dir = scratch_dir();
  std::ofstream(dir / "ops4.txt") << "0.5\n-0.5\n0.25\n-0.125\n";
  std::ofstream(dir / "g4.edges") << "N 4 directed=1\n0 1\n1 2\n2 3\n3 0\n";
  std::ofstream(dir / "t.csv") << "tick,p\n";

  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    RunConfig c;
    c.command = static_cast<Command>(gen() % 5);
    c.set_seed(gen() % 100000);
    c.output_dir = dir / ("o" + std::to_string(trial));
    if (c.command == Command::classify) {
      c.input = dir / "t.csv";
      c.skip = gen() % 50;
      c.classify = {std::ldexp(u(gen) + 0.5, -30), 1 + gen() % 300};
    } else {
      const bool sweepish = c.command == Command::sweep || c.command == Command::gallery;
      c.params = {0.999 * u(gen), 0.01 + 0.98 * u(gen), u(gen), 1.0 + u(gen), 100 * u(gen)};
      switch (sweepish ? 0 : gen() % 4) {
        case 0:
          c.graph.kind = GraphSpec::Kind::complete;
          c.graph.size = 2 + gen() % 40;
          break;
        case 1:
          c.graph.kind = GraphSpec::Kind::lattice;
          c.graph.size = 2 + gen() % 8;
          break;
        case 2:
          c.graph.kind = GraphSpec::Kind::random;
          c.graph.size = 2 + gen() % 40;
          c.graph.edge_prob = 0.01 + 0.99 * u(gen);
          break;
        default:
          c.graph.kind = GraphSpec::Kind::edge_list;
          c.graph.path = dir / "g4.edges";
      }
      switch (sweepish ? gen() % 2 : gen() % 3) {
        case 0:
          c.initial.kind = InitialSpec::Kind::fs;
          c.initial.theta0 = u(gen) - 0.5;
          if (c.initial.theta0 == 0.0) c.initial.theta0 = 0.25;
          if (!sweepish) c.graph = {GraphSpec::Kind::complete, 5, 0.0, c.seed, {}};
          break;
        case 1:
          c.initial.kind = InitialSpec::Kind::random;
          break;
        default:
          c.initial.kind = InitialSpec::Kind::explicit_values;
          c.initial_path = dir / "ops4.txt";
          c.initial.opinions = {0.5, -0.5, 0.25, -0.125};
          c.graph.kind = GraphSpec::Kind::edge_list;
          c.graph.path = dir / "g4.edges";
          c.graph.size = 0;
          c.graph.edge_prob = 0.0;
      }
      if (c.graph.kind != GraphSpec::Kind::random) c.graph.edge_prob = 0.0;
      if (c.graph.kind == GraphSpec::Kind::edge_list) c.graph.size = 0;
      c.initial.p0 = 200 * u(gen) + 101;
      c.initial.allow_extreme = gen() % 2;
      if (sweepish) {
        c.transient = gen() % 1000;
        c.classify = {1e-9 * (u(gen) + 0.5), 1 + gen() % 20};
        c.tail = 2 * c.classify.max_period + gen() % 10;
        const double start = 0.1 * u(gen);
        for (int k = 0, n = static_cast<int>(gen() % 6); k < n; ++k) {
          c.grid.push_back(start + 0.15 * k + 0.01 * u(gen));
        }
        if (c.command == Command::gallery && c.grid.empty()) c.grid.push_back(0.3);
      } else {
        c.stride = 1 + gen() % 10;
        c.steps = c.stride * (gen() % 100);
      }
    }
    INFO(render_config(c));
    CHECK(parse_config(render_config(c), "/elsewhere") == c);
  }
}
