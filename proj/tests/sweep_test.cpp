#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "coda/errors.hpp"
#include "coda/sweep.hpp"

using namespace coda;

namespace {

SweepSpec fs_spec(std::vector<double> grid) {
  SweepSpec spec;
  spec.base_params = {0.5, 0.5, 0.0, 1.0, 15.0};
  spec.grid = std::move(grid);
  spec.initial.kind = InitialSpec::Kind::fs;
  spec.initial.theta0 = 0.1;
  spec.initial.p0 = 100.0;
  spec.graph.kind = GraphSpec::Kind::complete;
  spec.graph.size = 20;
  return spec;
}

bool same_rows(const SweepRow& a, const SweepRow& b) {
  return a.param_value == b.param_value && class_name(a.attractor) == class_name(b.attractor) &&
         period_of(a.attractor) == period_of(b.attractor) && a.theta_samples == b.theta_samples &&
         a.theta_min_samples == b.theta_min_samples &&
         a.theta_max_samples == b.theta_max_samples && a.p_samples == b.p_samples;
}

}  // namespace

TEST_CASE("grids") {
  const auto grid = default_beta_grid();
  REQUIRE(grid.size() == 499);
  CHECK(grid.front() == doctest::Approx(0.501));
  CHECK(grid.back() == doctest::Approx(0.999));
  CHECK(std::is_sorted(grid.begin(), grid.end()));
  CHECK(arithmetic_grid(0.30, 0.49, 0.01).size() == 20);
  CHECK(arithmetic_grid(0.0, 1.0, 0.25) == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(arithmetic_grid(0.0, 0.9, 0.25).size() == 4);
  CHECK_THROWS_AS(arithmetic_grid(0.0, 1.0, 0.0), ConfigError);
}

TEST_CASE("swept parameter substitution") {
  const ModelParams base{0.2, 0.5, 0.0, 1.0, 15.0};
  CHECK(with_param(base, SweptParam::beta, 0.7).beta == 0.7);
  CHECK(with_param(base, SweptParam::gamma, 0.9).gamma == 0.9);
  CHECK(with_param(base, SweptParam::p_bar, 3.0).p_bar == 3.0);
  CHECK(param_name(SweptParam::p_bar) == "p_bar");
}

TEST_CASE("fixed point below one half") {
  const auto rows = run_sweep(fs_spec({0.45}));
  REQUIRE(rows.size() == 1);
  REQUIRE(std::holds_alternative<FixedPoint>(rows[0].attractor));
  const auto& fp = std::get<FixedPoint>(rows[0].attractor);
  CHECK(fp.theta_star[0] == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(fp.p_star == doctest::Approx(40.0).epsilon(1e-9));
  CHECK(rows[0].theta_samples.size() == 1024);
  CHECK(rows[0].theta_min_samples.empty());
}

TEST_CASE("FS limit is 1 - 2 beta across the lower range") {
  const auto grid = arithmetic_grid(0.05, 0.45, 0.05);
  const auto rows = run_sweep(fs_spec(grid));
  for (const auto& row : rows) {
    REQUIRE(std::holds_alternative<FixedPoint>(row.attractor));
    CHECK(std::get<FixedPoint>(row.attractor).theta_star[0] ==
          doctest::Approx(1.0 - 2.0 * row.param_value).epsilon(1e-9));
  }
}

TEST_CASE("upper range reaches a limit cycle") {
  const auto rows = run_sweep(fs_spec({0.999}));
  REQUIRE(rows.size() == 1);
  REQUIRE(std::holds_alternative<LimitCycle>(rows[0].attractor));
  CHECK(period_of(rows[0].attractor) > 1);
  const auto& samples = rows[0].theta_samples;
  CHECK(*std::min_element(samples.begin(), samples.end()) < 0.0);
  CHECK(*std::max_element(samples.begin(), samples.end()) > 0.0);
}

TEST_CASE("empty grid") {
  CHECK(run_sweep(fs_spec({})).empty());
}

TEST_CASE("rows depend on neither thread count nor grid neighbours") {
  auto spec = fs_spec({0.52, 0.61, 0.77, 0.93});
  spec.transient = 2000;
  spec.tail = 256;
  spec.classify.max_period = 64;
  const auto one = run_sweep(spec, 1);
  const auto four = run_sweep(spec, 4);
  REQUIRE(one.size() == 4);
  REQUIRE(four.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(same_rows(one[i], four[i]));

  // Each point computed alone matches the point computed among others.
  for (std::size_t i = 0; i < 4; ++i) {
    auto alone = spec;
    alone.grid = {spec.grid[i]};
    CHECK(same_rows(run_sweep(alone)[0], one[i]));
  }
}

TEST_CASE("non-FS sweeps report mean and spread") {
  SweepSpec spec = fs_spec({0.2, 0.3});
  spec.initial.kind = InitialSpec::Kind::random;
  spec.initial.seed = 5;
  spec.graph.kind = GraphSpec::Kind::random;
  spec.graph.size = 30;
  spec.graph.edge_prob = 0.2;
  spec.graph.seed = 5;
  spec.transient = 500;
  spec.tail = 64;
  spec.classify.max_period = 16;
  const auto rows = run_sweep(spec, 2);
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    REQUIRE(row.theta_min_samples.size() == 64);
    for (std::size_t t = 0; t < 64; ++t) {
      // the mean of equal values may land an ulp outside
      CHECK(row.theta_min_samples[t] <= row.theta_samples[t] + 1e-12);
      CHECK(row.theta_samples[t] <= row.theta_max_samples[t] + 1e-12);
    }
  }
}

TEST_CASE("sweep validation names the offending value") {
  auto spec = fs_spec({0.5, 1.2});
  try {
    run_sweep(spec);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("1.2") != std::string::npos);
  }
  CHECK_THROWS_AS(run_sweep(fs_spec({0.6, 0.5})), ConfigError);
  auto short_tail = fs_spec({0.6});
  short_tail.tail = 100;
  CHECK_THROWS_AS(run_sweep(short_tail), ConfigError);
  auto fs_on_lattice = fs_spec({0.6});
  fs_on_lattice.graph.kind = GraphSpec::Kind::lattice;
  fs_on_lattice.graph.size = 4;
  CHECK_THROWS_AS(run_sweep(fs_on_lattice), ConfigError);
}

TEST_CASE("gallery trajectories") {
  auto spec = fs_spec({});
  spec.transient = 300;
  spec.tail = 64;
  spec.classify.max_period = 32;
  const std::vector<double> betas{0.4, 0.9};
  const auto entries = attractor_gallery(betas, spec, 2);
  REQUIRE(entries.size() == 2);
  for (const auto& e : entries) {
    REQUIRE(e.trajectory.snapshots.size() == 364);
    CHECK(e.trajectory.snapshots.front().tick == 0);
    CHECK(e.trajectory.snapshots.back().tick == 363);
    CHECK(e.trajectory.params.beta == e.beta);
  }
  CHECK(entries[0].beta == 0.4);
  CHECK(std::holds_alternative<FixedPoint>(entries[0].attractor));

  // The gallery run and a sweep over the same point see the same tail.
  spec.grid = {0.9};
  const auto row = run_sweep(spec)[0];
  for (std::size_t t = 0; t < 64; ++t) {
    CHECK(entries[1].trajectory.snapshots[300 + t].opinions[0] == row.theta_samples[t]);
  }
}
