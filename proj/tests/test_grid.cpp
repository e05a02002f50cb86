#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "pmelab/grid.hpp"

using namespace pmelab;

TEST_CASE("uniform grid exposes nodes, times and weights") {
  SpaceTimeGrid g = SpaceTimeGrid::uniform(1, {0.0, 0.0}, {5, 1}, 0.25, 0.0,
                                           1.0, 4);
  CHECK(g.dim() == 1);
  CHECK(g.spatial_count() == 5);
  CHECK(g.time_count() == 5);
  CHECK(g.time(2) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(g.t_end() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g.slice_weight(0) == 0.0);
  CHECK(g.slice_weight(3) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(g.cell_volume() == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(g.x(0, 4) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g.nearest_time_index(0.6) == 2);
  // Equidistant request resolves to the earlier slice.
  CHECK(g.nearest_time_index(0.375) == 1);
}

TEST_CASE("grid constructor rejects malformed input") {
  CHECK_THROWS_AS(SpaceTimeGrid(3, {0, 0}, {5, 5}, 0.1, 0.0, {0.1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(SpaceTimeGrid(1, {0, 0}, {5, 1}, -0.1, 0.0, {0.1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(SpaceTimeGrid(1, {0, 0}, {2, 1}, 0.1, 0.0, {0.1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(SpaceTimeGrid(1, {0, 0}, {5, 1}, 0.1, 0.0, {0.1, -0.2}),
                  std::invalid_argument);
}

TEST_CASE("position and flat_index agree in 2d") {
  SpaceTimeGrid g = SpaceTimeGrid::uniform(2, {-1.0, 2.0}, {4, 3}, 0.5, 0.0,
                                           1.0, 2);
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 4; ++i) {
      Vec2 p = g.position(g.flat_index(i, j));
      CHECK(p[0] == doctest::Approx(-1.0 + 0.5 * i).epsilon(1e-14));
      CHECK(p[1] == doctest::Approx(2.0 + 0.5 * j).epsilon(1e-14));
    }
  }
}

TEST_CASE("grid function stores slices contiguously") {
  auto g = std::make_shared<SpaceTimeGrid>(
      SpaceTimeGrid::uniform(1, {0, 0}, {3, 1}, 1.0, 0.0, 2.0, 2));
  GridFunction u(g);
  u.at(1, 2) = 7.0;
  CHECK(u.values[2 * 3 + 1] == 7.0);
  CHECK(u.max_value() == 7.0);
  CHECK(u.min_value() == 0.0);
}

TEST_CASE("sample evaluates the function and rejects non-finite values") {
  auto g = std::make_shared<SpaceTimeGrid>(
      SpaceTimeGrid::uniform(1, {-1, 0}, {5, 1}, 0.5, 0.0, 1.0, 2));
  GridFunction u = sample([](const Vec2& x, double t) { return x[0] + t; }, g);
  CHECK(u.at(0, 0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(u.at(4, 2) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS(sample(
      [](const Vec2& x, double) {
        return x[0] == 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
      },
      g));
}

TEST_CASE("oscillation over a known linear field") {
  auto g = std::make_shared<SpaceTimeGrid>(
      SpaceTimeGrid::uniform(1, {-1, 0}, {5, 1}, 0.5, 0.0, 1.0, 2));
  GridFunction u = sample([](const Vec2& x, double) { return x[0]; }, g);
  Cylinder cyl;
  cyl.center = {0.0, 0.0};
  cyl.radius = 0.5;
  cyl.t_top = 1.0;
  cyl.depth = 1.0;
  CHECK(oscillation(u, cyl) == doctest::Approx(1.0).epsilon(1e-14));
  Cylinder empty = cyl;
  empty.center = {100.0, 0.0};
  CHECK_THROWS_AS(oscillation(u, empty), std::invalid_argument);
}

TEST_CASE("node-counting measures add up on a hand-checked configuration") {
  // 9 nodes on [-1,1], h = 1/4; 4 uniform steps on (0, 1]; u = x.
  auto g = std::make_shared<SpaceTimeGrid>(
      SpaceTimeGrid::uniform(1, {-1, 0}, {9, 1}, 0.25, 0.0, 1.0, 4));
  GridFunction u = sample([](const Vec2& x, double) { return x[0]; }, g);
  Cylinder cyl;
  cyl.center = {0.0, 0.0};
  cyl.radius = 1.0;
  cyl.t_top = 1.0;
  cyl.depth = 1.0;
  double region = region_measure(u, cyl);
  double sub = sublevel_measure(u, 0.0, cyl);
  double super = superlevel_measure(u, 0.0, cyl);
  CHECK(region == doctest::Approx(2.25).epsilon(1e-14));  // 4*0.25*9*0.25
  CHECK(sub == doctest::Approx(1.25).epsilon(1e-14));     // 5 of 9 nodes
  CHECK(super == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sub + super == doctest::Approx(region).epsilon(1e-14));

  Cube box;
  box.center = {0.0, 0.0};
  box.side = 2.0;
  CHECK(spatial_sublevel_measure(u, 0, 0.0, box) ==
        doctest::Approx(1.25).epsilon(1e-14));
}

TEST_CASE("node-counting sublevel measure converges to the continuum value") {
  // |{x <= 0} n B_1 x (0,1]| = 1; the node count overshoots by at most one
  // cell per slice.
  for (int nx : {33, 129}) {
    double h = 2.0 / (nx - 1);
    auto g = std::make_shared<SpaceTimeGrid>(
        SpaceTimeGrid::uniform(1, {-1, 0}, {nx, 1}, h, 0.0, 1.0, 8));
    GridFunction u = sample([](const Vec2& x, double) { return x[0]; }, g);
    Cylinder cyl;
    cyl.center = {0.0, 0.0};
    cyl.radius = 1.0;
    cyl.t_top = 1.0;
    cyl.depth = 1.0;
    CHECK(sublevel_measure(u, 0.0, cyl) == doctest::Approx(1.0).epsilon(2 * h));
  }
}

TEST_CASE("scaling transform transports the grid without interpolation") {
  auto g = std::make_shared<SpaceTimeGrid>(
      SpaceTimeGrid::uniform(1, {-1, 0}, {9, 1}, 0.25, 0.0, 1.0, 4));
  GridFunction u = sample([](const Vec2& x, double t) { return x[0] * x[0] + t; },
                          g);
  const double r = 0.5, alpha = 1.0;
  GridFunction v = scaling_transform(u, r, alpha);
  const SpaceTimeGrid& gv = *v.grid;
  CHECK(gv.h() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(gv.origin()[0] == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(gv.t_end() == doctest::Approx(2.0).epsilon(1e-14));
  // v(x', t') = r^{-alpha} u(r x', r^{2-alpha} t') at every transported node.
  for (int k = 0; k < gv.time_count(); ++k) {
    for (int i = 0; i < gv.spatial_count(); ++i) {
      Vec2 xp = gv.position(i);
      double tp = gv.time(k);
      double expect =
          std::pow(r, -alpha) *
          ((r * xp[0]) * (r * xp[0]) + std::pow(r, 2.0 - alpha) * tp);
      CHECK(v.at(i, k) == doctest::Approx(expect).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(scaling_transform(u, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("cylinder membership follows the half-open time convention") {
  Cylinder cyl;
  cyl.center = {0.0, 0.0};
  cyl.radius = 1.0;
  cyl.t_top = 2.0;
  cyl.depth = 1.0;
  CHECK(cyl.contains_time(2.0));
  CHECK(cyl.contains_time(1.5));
  CHECK_FALSE(cyl.contains_time(1.0));  // bottom excluded
  CHECK_FALSE(cyl.contains_time(2.5));
  CHECK(cyl.contains_space(1, {1.0, 0.0}));  // spatially closed
  CHECK_FALSE(cyl.contains_space(1, {1.1, 0.0}));
}

TEST_CASE("full_region covers every node") {
  auto g = std::make_shared<SpaceTimeGrid>(
      SpaceTimeGrid::uniform(2, {-1, -1}, {5, 5}, 0.5, -1.0, 1.0, 4));
  GridFunction u(g, 1.0);
  Cylinder all = full_region(*g);
  double expect = 4 * 0.5 * 25 * 0.25;  // slices 1..4, 25 nodes, h^2
  CHECK(region_measure(u, all) == doctest::Approx(expect).epsilon(1e-12));
}
