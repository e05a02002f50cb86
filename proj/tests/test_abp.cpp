#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>
#include <vector>

#include "helpers.hpp"
#include "pmelab/abp.hpp"
#include "pmelab/errors.hpp"

using namespace pmelab;

namespace {

// Grid covering B_R x [0, t1] for the n=1 constants (R = 5).
GridPtr contact_grid(double t1, int steps, int nx = 45) {
  auto g0 = testutil::slice_grid(1, 5.5, nx, 0.0);
  return std::make_shared<SpaceTimeGrid>(SpaceTimeGrid::uniform(
      1, g0->origin(), {nx, 1}, g0->h(), 0.0, t1, steps));
}

}  // namespace

TEST_CASE("constants come out of the closed formulas") {
  AbpParams p2 = make_params(EllipticityInterval(1.0, 1.0), 2);
  CHECK(p2.alpha_c == 100.0);
  CHECK(p2.m == 0.5);
  CHECK(p2.tau == 2.0);
  CHECK(p2.R == doctest::Approx(5.0 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(p2.T == 4.0);
  CHECK(p2.M_bound == p2.alpha_c);

  AbpParams q = make_params(EllipticityInterval(0.25, 2.0), 2);
  CHECK(q.alpha_c == 400.0);
  CHECK(q.m == 0.25);

  for (int n : {1, 2}) {
    AbpParams p = make_params(EllipticityInterval(0.5, 3.0), n);
    CHECK(p.R - 1.0 >= 2.0 * std::sqrt(p.tau + 1.0));
    CHECK(p.alpha_c >= 1.0);
    CHECK(p.m <= 1.0);
    // the constants force contact points well inside the quarter ball:
    // (1 + m n Lambda) / (lambda alpha_c) <= 1/50 < (1/4)^2
    double gate = (1.0 + p.m * p.n * p.ell.Lambda) / (p.ell.lambda * p.alpha_c);
    CHECK(gate <= 1.0 / 50.0 + 1e-15);
  }
  CHECK_THROWS_AS(make_params(EllipticityInterval(1.0, 1.0), 3),
                  std::invalid_argument);
}

TEST_CASE("degenerate data touch at the origin and localize") {
  AbpParams p = make_params(EllipticityInterval(1.0, 1.0), 1);
  GridFunction u(contact_grid(1.0, 16), 0.0);
  LocalizationReport rep = localization_check(u, p);
  CHECK(rep.hypothesis_met);
  CHECK(rep.all_localized);
  REQUIRE(!rep.contacts.entries.empty());
  for (const auto& e : rep.contacts.entries) {
    CHECK(std::abs(e.x[0]) <= 0.25 + 1e-12);
    CHECK(e.t > 0.0);
  }
}

TEST_CASE("a small static bump keeps its contacts in the quarter ball") {
  AbpParams p = make_params(EllipticityInterval(1.0, 1.0), 1);
  GridFunction u = sample(
      [](const Vec2& x, double) {
        double v = 1.0 - x[0] * x[0];
        return v > 0.0 ? 0.3 * v : 0.0;
      },
      contact_grid(1.0, 16));
  LocalizationReport rep = localization_check(u, p);
  CHECK(rep.hypothesis_met);  // 0.3 <= m = 1
  CHECK(rep.all_localized);
}

TEST_CASE("contact values above the elliptic threshold are flagged") {
  AbpParams p = make_params(EllipticityInterval(1.0, 2.0), 1);  // m = 1/2
  GridFunction u(contact_grid(1.0, 16), 2.0);
  LocalizationReport rep = localization_check(u, p);
  CHECK_FALSE(rep.hypothesis_met);
  CHECK(rep.all_localized);  // the steep paraboloid still pins them near 0
}

TEST_CASE("unreachable data raise the contact-hypothesis error") {
  AbpParams p = make_params(EllipticityInterval(1.0, 1.0), 1);
  GridFunction u(contact_grid(1.0, 16), 200.0);  // above alpha_c * t_top
  CHECK_THROWS_AS(localization_check(u, p), HypothesisViolation);
  CHECK_THROWS_AS(abp_measure_estimate(u, p), HypothesisViolation);
}

TEST_CASE("constant one is elliptic with a full sublevel set") {
  // m = 1/2 here, and the fine grid keeps the contact tolerance below the
  // gap 1 - m, so the contact values land above the elliptic threshold.
  AbpParams p = make_params(EllipticityInterval(1.0, 2.0), 1);
  GridFunction u(contact_grid(1.0, 16, 89), 1.0);
  AbpReport rep = abp_measure_estimate(u, p);
  CHECK(rep.elliptic_regime);
  CHECK(rep.sublevel_fraction == 1.0);
  CHECK(rep.passed);
}

TEST_CASE("constant zero defers to the dyadic refinement") {
  AbpParams p = make_params(EllipticityInterval(1.0, 1.0), 1);
  GridFunction u(contact_grid(1.0, 16), 0.0);
  AbpReport rep = abp_measure_estimate(u, p);
  CHECK_FALSE(rep.elliptic_regime);
  CHECK_FALSE(rep.passed);
  CHECK(rep.sublevel_fraction == 1.0);  // trivially below any level
}

TEST_CASE("sublevel fraction never decreases in the bound level") {
  Trajectory tr = testutil::run_front(1, 45, 5.5, 0.0, 1.0);
  AbpParams p = make_params(EllipticityInterval(1.0, 1.0), 1);
  double prev = -1.0;
  for (double M : {0.2, 0.5, 1.0, 2.0, 5.0, 100.0}) {
    p.M_bound = M;
    AbpReport rep = abp_measure_estimate(tr.u, p);
    CHECK(rep.sublevel_fraction >= prev - 1e-15);
    CHECK(rep.sublevel_fraction >= 0.0);
    CHECK(rep.sublevel_fraction <= 1.0);
    prev = rep.sublevel_fraction;
  }
}

TEST_CASE("generation zero matches the baseline estimate on unit-time grids") {
  AbpParams p = make_params(EllipticityInterval(1.0, 1.0), 1);
  GridFunction u(contact_grid(1.0, 16), 1.0);
  AbpReport a = abp_measure_estimate(u, p);
  AbpReport b = rescaled_abp(u, 0, p);
  CHECK(a.elliptic_regime == b.elliptic_regime);
  CHECK(a.sublevel_fraction == b.sublevel_fraction);
  CHECK(a.contacts.size() == b.contacts.size());
  CHECK(a.passed == b.passed);
  CHECK_THROWS_AS(rescaled_abp(u, -1, p), std::invalid_argument);
}

TEST_CASE("halving space and doubling values conjugates the estimate exactly") {
  // w(x', t') = 2 u(x'/2, t'/2) turns the generation-1 run on u into the
  // generation-0 run on w; with explicitly matched tolerances every branch
  // (crossing, tie, threshold, level) compares scaled-by-two numbers, which
  // is exact in floating point.
  Trajectory tr = testutil::run_front(1, 41, 5.0, 0.0, 2.0);
  const GridFunction& u = tr.u;
  GridFunction w = scaling_transform(u, 0.5, 1.0);
  AbpParams p = make_params(EllipticityInterval(1.0, 1.0), 1);
  p.M_bound = 1.5;

  const double eps0 = contact_tolerance(u.grid->h());
  AbpReport ru = rescaled_abp(u, 1, p, 2.0 * eps0);
  AbpReport rw = rescaled_abp(w, 0, p, 4.0 * eps0);

  CHECK(ru.elliptic_regime == rw.elliptic_regime);
  CHECK(ru.passed == rw.passed);
  CHECK(ru.sublevel_fraction == rw.sublevel_fraction);  // bitwise
  REQUIRE(ru.contacts.size() == rw.contacts.size());
  for (size_t i = 0; i < ru.contacts.size(); ++i) {
    CHECK(ru.contacts[i].spatial == rw.contacts[i].spatial);
    CHECK(ru.contacts[i].time_index == rw.contacts[i].time_index);
    CHECK(2.0 * ru.contacts[i].u_value == rw.contacts[i].u_value);
  }
}
