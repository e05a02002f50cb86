#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "pmelab/refsol.hpp"
#include "pmelab/scheme.hpp"

using namespace pmelab;

namespace {

GridPtr tent_grid() {
  return std::make_shared<SpaceTimeGrid>(
      SpaceTimeGrid(1, {-1.0, 0.0}, {5, 1}, 0.5, 0.0, {}));
}

const std::vector<double> kTent{0.0, 1.0, 2.0, 1.0, 0.0};

}  // namespace

TEST_CASE("cfl_dt reproduces the advertised stability bound") {
  auto g = tent_grid();
  SolverConfig cfg = testutil::basic_config(1, 1.0, 1.0, 1.0, PucciSign::Minus);
  cfg.boundary = [](const Vec2&, double) { return 0.0; };
  // max u = 2; steepest node has |D+| + |D-| = 4; K = 1 direction.
  double denom = 2.0 * 1.0 * 1.0 * 2.0 + 2.0 * 0.5 * 1.0 * 4.0 + 1e-12;
  double expect = 0.9 * 0.25 / denom;
  CHECK(cfl_dt(kTent.data(), *g, cfg, 1.0) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(cfl_dt(kTent.data(), *g, cfg, 1e-4) == doctest::Approx(1e-4));
  cfg.max_dt = 1e-5;
  CHECK(cfl_dt(kTent.data(), *g, cfg, 1.0) == doctest::Approx(1e-5));
}

TEST_CASE("one explicit step matches the hand-computed update") {
  auto g = tent_grid();
  SolverConfig cfg = testutil::basic_config(1, 1.0, 1.0, 1.0, PucciSign::Minus);
  cfg.boundary = [](const Vec2&, double) { return 7.0; };
  double dt = 0.01;
  std::vector<double> next = step(kTent, 0.0, dt, *g, cfg);
  CHECK(next[0] == 7.0);
  CHECK(next[4] == 7.0);
  // center: d2 = (1 - 4 + 1)/0.25 = -8, upwind gradient term vanishes
  CHECK(next[2] == doctest::Approx(2.0 + dt * (2.0 * -8.0)).epsilon(1e-14));
  // flanks: curvature cancels, Godunov H = (uphill slope)^2 = 4
  CHECK(next[1] == doctest::Approx(1.0 + dt * 4.0).epsilon(1e-14));
  CHECK(next[3] == doctest::Approx(1.0 + dt * 4.0).epsilon(1e-14));
}

TEST_CASE("step rejects unstable or malformed input") {
  auto g = tent_grid();
  SolverConfig cfg = testutil::basic_config(1, 1.0, 1.0, 1.0, PucciSign::Minus);
  cfg.boundary = [](const Vec2&, double) { return 0.0; };
  double bound = cfl_dt(kTent.data(), *g, cfg, 1e9);
  CHECK_THROWS_AS(step(kTent, 0.0, bound * 1.01, *g, cfg), std::runtime_error);
  CHECK_NOTHROW(step(kTent, 0.0, bound, *g, cfg));
  std::vector<double> wrong{0.0, 1.0, 0.0};
  CHECK_THROWS_AS(step(wrong, 0.0, 1e-6, *g, cfg), std::invalid_argument);
  SolverConfig bad = cfg;
  bad.boundary = [](const Vec2&, double) {
    return std::numeric_limits<double>::infinity();
  };
  CHECK_THROWS_AS(step(kTent, 0.0, 1e-6, *g, bad), std::runtime_error);
}

TEST_CASE("solver config validation rejects inconsistent parameters") {
  SolverConfig cfg = testutil::basic_config(1, 1.0, 2.0, 1.0, PucciSign::Minus);
  cfg.boundary = [](const Vec2&, double) { return 0.0; };
  CHECK_NOTHROW(cfg.validate(1));
  SolverConfig bad = cfg;
  bad.b_coeff = 3.0;  // outside [lambda, Lambda]
  CHECK_THROWS_AS(bad.validate(1), std::invalid_argument);
  bad = cfg;
  bad.cfl_safety = 0.0;
  CHECK_THROWS_AS(bad.validate(1), std::invalid_argument);
  bad = cfg;
  bad.boundary = nullptr;
  CHECK_THROWS_AS(bad.validate(1), std::invalid_argument);
  bad = cfg;  // 1-d stencil on a 2-d grid
  CHECK_THROWS_AS(bad.validate(2), std::invalid_argument);
}

TEST_CASE("solve lands on t_final and indexes snapshots") {
  Trajectory tr = testutil::run_front(1, 33, 2.0, 0.0, 0.2);
  const SpaceTimeGrid& g = *tr.u.grid;
  CHECK(g.t_end() == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(g.time_count() >= 2);

  FrontSolution f = make_front(1, {1.0, 0.0}, 1.0);
  SolverConfig cfg = testutil::basic_config(1, 1.0, 1.0, 1.0, PucciSign::Minus);
  cfg.boundary = [f](const Vec2& x, double t) { return f.value(x, t); };
  GridFunction u0 = sample(cfg.boundary, testutil::slice_grid(1, 2.0, 33, 0.0));
  Trajectory snap = solve(u0, cfg, 0.2, {0.0, 0.1, 0.2});
  REQUIRE(snap.snapshot_indices.size() == 3);
  CHECK(snap.snapshot_indices[0] == 0);
  CHECK(snap.snapshot_indices[2] == snap.u.grid->time_count() - 1);
  double tmid = snap.u.grid->time(snap.snapshot_indices[1]);
  CHECK(std::abs(tmid - 0.1) <= 0.5 * *std::max_element(
                                         snap.u.grid->dt_list().begin(),
                                         snap.u.grid->dt_list().end()) + 1e-12);

  CHECK_THROWS_AS(solve(u0, cfg, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(solve(tr.u, cfg, 1.0), std::invalid_argument);  // not a slice
}

TEST_CASE("prescribed time steps replay a trajectory bitwise") {
  Trajectory a = testutil::run_front(1, 33, 2.0, 0.0, 0.1);
  std::vector<double> dts = a.u.grid->dt_list();
  FrontSolution f = make_front(1, {1.0, 0.0}, 1.0);
  SolverConfig cfg = testutil::basic_config(1, 1.0, 1.0, 1.0, PucciSign::Minus);
  cfg.boundary = [f](const Vec2& x, double t) { return f.value(x, t); };
  GridFunction u0 = sample(cfg.boundary, testutil::slice_grid(1, 2.0, 33, 0.0));
  Trajectory b = solve(u0, cfg, 0.1, {}, &dts);
  REQUIRE(b.u.values.size() == a.u.values.size());
  for (size_t i = 0; i < a.u.values.size(); ++i)
    CHECK(a.u.values[i] == b.u.values[i]);

  std::vector<double> short_list(dts.begin(), dts.end() - 1);
  CHECK_THROWS_AS(solve(u0, cfg, 0.1, {}, &short_list), std::runtime_error);
}

TEST_CASE("ordered data stay ordered under lockstep evolution") {
  // lambda=1, Lambda=2, b=1 keeps the update nondecreasing in every
  // neighbor at cfl 0.75 for nonnegative slices; ordering must persist.
  auto g = testutil::slice_grid(1, 2.0, 33, 0.0);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> lo = testutil::smooth_profile(33, 2.0, rng, 0.0, 1.0);
    std::vector<double> bump = testutil::smooth_profile(33, 2.0, rng, 0.0, 0.3);
    std::vector<double> hi(33);
    for (int i = 0; i < 33; ++i) hi[i] = lo[i] + bump[i];

    PucciSign sign = seed % 2 ? PucciSign::Minus : PucciSign::Plus;
    SolverConfig ca = testutil::basic_config(1, 1.0, 2.0, 1.0, sign);
    ca.cfl_safety = 0.75;
    SolverConfig cb = ca;
    ca.boundary = frozen_boundary(testutil::slice_function(g, lo));
    cb.boundary = frozen_boundary(testutil::slice_function(g, hi));

    std::vector<double> ua = lo, ub = hi;
    double t = 0.0, tf = 0.15;
    while (tf - t > 1e-12) {
      double dt = std::min(cfl_dt(ua.data(), *g, ca, tf - t),
                           cfl_dt(ub.data(), *g, cb, tf - t));
      ua = step(ua, t, dt, *g, ca);
      ub = step(ub, t, dt, *g, cb);
      t += dt;
      for (int i = 0; i < 33; ++i) {
        REQUIRE(ua[i] <= ub[i] + 1e-12);
        REQUIRE(ua[i] >= -1e-12);  // nonnegativity is preserved too
      }
    }
  }
}

TEST_CASE("fronts with other gradient coefficients keep their exact profile") {
  Trajectory tr = testutil::run_front(1, 129, 2.0, 0.0, 0.25, 4.0);
  const SpaceTimeGrid& g = *tr.u.grid;
  int kf = g.time_count() - 1;
  FrontSolution f = make_front(1, {1.0, 0.0}, 4.0);
  double worst = 0.0;
  for (int i = 0; i < g.nodes(0); ++i) {
    double x = g.x(0, i);
    if (std::abs(0.5 * x + 0.25) <= 3.0 * g.h()) continue;  // near the kink
    worst = std::max(worst,
                     std::abs(tr.u.at(i, kf) - f.value({x, 0.0}, 0.25)));
  }
  CHECK(worst < 2e-2);
}

TEST_CASE("variable coefficients reduce to the constant-coefficient solver") {
  auto g = testutil::slice_grid(1, 2.0, 33, 0.0);
  std::mt19937_64 rng(7);
  GridFunction u0 =
      testutil::slice_function(g, testutil::smooth_profile(33, 2.0, rng, 0.0, 0.8));
  SolverConfig cfg = testutil::basic_config(1, 1.0, 1.0, 1.0, PucciSign::Minus);
  cfg.boundary = frozen_boundary(u0);

  CoefficientField unit;
  unit.a.assign(33, 1.0);
  unit.b.assign(33, 1.0);
  Trajectory va = solve_variable_coefficients(u0, unit, cfg, 0.1);
  Trajectory ref = solve(u0, cfg, 0.1);
  REQUIRE(va.u.values.size() == ref.u.values.size());
  for (size_t i = 0; i < ref.u.values.size(); ++i)
    CHECK(va.u.values[i] == ref.u.values[i]);
}

TEST_CASE("random coefficient fields stay within bounds and evolve stably") {
  auto g = testutil::slice_grid(1, 2.0, 65, 0.0);
  EllipticityInterval ell(1.0, 2.0);
  CoefficientField f = sample_coefficient_field(*g, ell, 42);
  REQUIRE(f.a.size() == 65);
  REQUIRE(f.b.size() == 65);
  for (double v : f.a) CHECK((v >= 1.0 && v <= 2.0));
  for (double v : f.b) CHECK((v >= 1.0 && v <= 2.0));
  CoefficientField f2 = sample_coefficient_field(*g, ell, 42);
  CHECK(f.a == f2.a);  // deterministic in the seed

  std::mt19937_64 rng(3);
  GridFunction u0 =
      testutil::slice_function(g, testutil::smooth_profile(65, 2.0, rng, 0.0, 0.8));
  SolverConfig cfg = testutil::basic_config(1, 1.0, 2.0, 2.0, PucciSign::Minus);
  cfg.boundary = frozen_boundary(u0);
  Trajectory tr = solve_variable_coefficients(u0, f, cfg, 0.3);
  tr.u.check_finite("variable-coefficient trajectory");
  CHECK(tr.u.min_value() >= -1e-12);
  CHECK(tr.u.grid->t_end() == doctest::Approx(0.3).epsilon(1e-12));

  GridFunction u2d(testutil::slice_grid(2, 1.0, 9, 0.0), 0.0);
  SolverConfig c2 = testutil::basic_config(2, 1.0, 2.0, 2.0, PucciSign::Minus);
  c2.boundary = [](const Vec2&, double) { return 0.0; };
  CHECK_THROWS_AS(solve_variable_coefficients(u2d, f, c2, 0.1),
                  std::invalid_argument);
}

TEST_CASE("frozen_boundary echoes the initial slice at node positions") {
  auto g = testutil::slice_grid(1, 1.0, 9, 0.0);
  std::vector<double> vals(9);
  for (int i = 0; i < 9; ++i) vals[i] = std::sin(0.7 * i);
  GridFunction u0 = testutil::slice_function(g, vals);
  BoundaryFn bc = frozen_boundary(u0);
  for (int i = 0; i < 9; ++i)
    CHECK(bc({g->x(0, i), 0.0}, 5.0) == vals[i]);
  // off-node queries snap to the nearest node
  CHECK(bc({g->x(0, 3) + 0.2 * g->h(), 0.0}, 1.0) == vals[3]);
  CHECK(bc({-55.0, 0.0}, 1.0) == vals[0]);
}
