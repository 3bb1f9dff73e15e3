// Config parsing and scenario construction, plus the end-to-end runner
// behaviours that do not need a shell: determinism of emitted numbers,
// exit-code-relevant error types.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "damplab/csv.hpp"
#include "damplab/scenario.hpp"

using namespace damplab;

TEST_CASE("config defaults and overrides") {
  auto cfg = ExperimentConfig::from_text("");
  CHECK(cfg.scenario == "maxwell2d");
  CHECK(cfg.grid.nx == 16);
  CHECK(cfg.effective_dt(GridSpec{16, 16}) == doctest::Approx(0.03125));

  auto cfg2 = ExperimentConfig::from_text(R"(
[experiment]
scenario = counterexample
seed = 9
[scan]
refinements = 8 16 32
lambdas = 0 0.5 -0.5
[time]
horizon = 5
dt = 0.01
)");
  CHECK(cfg2.scenario == "counterexample");
  CHECK(cfg2.seed == 9);
  REQUIRE(cfg2.refinements.size() == 3);
  CHECK(cfg2.refinements[2] == 32);
  CHECK(cfg2.lambdas().size() == 3);
  CHECK(cfg2.dt == doctest::Approx(0.01));
}

TEST_CASE("config rejects malformed input") {
  CHECK_THROWS_AS(ExperimentConfig::from_text("[experiment]\nscenario = bogus\n"),
                  ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_text("[grid]\nnx = -3\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_text("[grid]\nnx\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_text("[time]\ndt = 0\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_text("[region]\nrect = 1 2 3\n"),
                  ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_text("[scan]\nlambdas = a b\n"),
                  ConfigError);
  // empty region at parse-independent level: region that catches no edges
  auto cfg = ExperimentConfig::from_text(
      "[region]\nrect = 0.001 0.001 0.002 0.002\n[grid]\nnx = 8\nny = 8\n");
  CHECK_THROWS_AS(build_scenario(cfg, 8), ConfigError);
}

TEST_CASE("maxwell scenario carries its region and materials") {
  auto cfg = ExperimentConfig::from_text(R"(
[region]
rect = 0 0 0.5 1.0
[materials]
sigma = 2.0
)");
  Scenario sc = build_scenario(cfg, 8);
  CHECK(sc.has_grid);
  CHECK(sc.grid.nx == 8);
  CHECK(sc.materials.sigma_lower == doctest::Approx(2.0));
  CHECK(sc.state_dim() == sc.sys.c.cols() + sc.frame.rank());
  CHECK(sc.kernel.dim() > 0);
  // gamma_state + askew = -A
  Matrix sum = sc.gamma_state.m + sc.askew.m + sc.a_reduced.m;
  CHECK(sum.norm_fro() == 0.0);
  auto gv = validate_gamma(sc.gamma_state, sc.damped_state);
  CHECK(gv.ok);
  CHECK(gv.accretivity_c == doctest::Approx(2.0));
}

TEST_CASE("abstract scenario coupling violates the damping hypothesis") {
  auto cfg = ExperimentConfig::from_text(R"(
[experiment]
scenario = abstract
[abstract]
n = 8
coupling = 0.1
)");
  Scenario sc = build_scenario(cfg, 8);
  auto gv = validate_gamma(sc.gamma_state, sc.damped_state);
  CHECK(!gv.ok);
  CHECK(gv.violated.find("off-diagonal") != std::string::npos);

  auto clean = ExperimentConfig::from_text(
      "[experiment]\nscenario = abstract\n[abstract]\nn = 8\n");
  Scenario sc2 = build_scenario(clean, 8);
  CHECK(validate_gamma(sc2.gamma_state, sc2.damped_state).ok);
}

TEST_CASE("initial states are deterministic in the seed") {
  auto cfg = ExperimentConfig::from_text("[region]\nrect = 0 0 0.5 1\n");
  Scenario sc = build_scenario(cfg, 8);
  auto u1 = initial_state(sc, 42);
  auto u2 = initial_state(sc, 42);
  auto u3 = initial_state(sc, 43);
  REQUIRE(u1.size() == u2.size());
  bool identical = true, differs = false;
  for (std::size_t i = 0; i < u1.size(); ++i) {
    identical = identical && u1[i] == u2[i];
    differs = differs || u1[i] != u3[i];
  }
  CHECK(identical);
  CHECK(differs);
}

TEST_CASE("trajectories rerun to identical bits") {
  auto cfg = ExperimentConfig::from_text(R"(
[region]
rect = 0 0 0.5 1.0
[time]
horizon = 6.0
)");
  Scenario sc = build_scenario(cfg, 8);
  auto u0 = initial_state(sc, 5);
  auto t1 = run_trajectory(sc, cfg, u0);
  auto t2 = run_trajectory(sc, cfg, u0);
  REQUIRE(t1.energies.size() == t2.energies.size());
  for (std::size_t i = 0; i < t1.energies.size(); ++i) {
    CHECK(t1.energies[i] == t2.energies[i]);
    CHECK(t1.energies_physical[i] == t2.energies_physical[i]);
  }
  // energies never increase beyond the documented slack
  for (std::size_t i = 1; i < t1.energies.size(); ++i)
    CHECK(t1.energies[i] <= t1.energies[i - 1] * (1.0 + 1e-12));
  // the physical and transformed energies agree after back-substitution
  for (std::size_t i = 0; i < t1.energies.size(); ++i)
    CHECK(t1.energies_physical[i] ==
          doctest::Approx(t1.energies[i]).epsilon(1e-10));
}

TEST_CASE("csv numbers round-trip at 17 significant digits") {
  const double x = 0.1234567890123456789;
  CHECK(std::stod(csv_number(x)) == x);
  CHECK(csv_number(1.0) == "1");
  CHECK(csv_number(0.5) == "0.5");
}
