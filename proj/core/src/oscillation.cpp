#include "pmelab/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "pmelab/paraboloid.hpp"

namespace pmelab {

namespace {

Cylinder centered_cylinder(double radius, double depth) {
  Cylinder c;
  c.center = {0.0, 0.0};
  c.t_top = 0.0;
  c.radius = radius;
  c.depth = depth;
  return c;
}

// sup / inf of u over grid nodes in the cylinder.
std::array<double, 2> range_over(const GridFunction& u, const Cylinder& cyl) {
  const SpaceTimeGrid& g = *u.grid;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int k = 0; k < g.time_count(); ++k) {
    if (!cyl.contains_time(g.time(k))) continue;
    for (int i = 0; i < g.spatial_count(); ++i) {
      if (!cyl.contains_space(g.dim(), g.position(i))) continue;
      double v = u.at(i, k);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(lo <= hi))
    throw std::invalid_argument("improvement check: empty cylinder");
  return {lo, hi};
}

}  // namespace

GridFunction truncate_exp_transform(const GridFunction& u,
                                    const EllipticityInterval& ell) {
  const double A = 2.0 * ell.Lambda / ell.lambda;
  GridFunction v(u.grid);
  v.flag_non_negative = true;
  for (size_t idx = 0; idx < u.values.size(); ++idx) {
    double w = u.values[idx];
    if (w < -1e-9 || w > 1.0 + 1e-9)
      throw std::invalid_argument(
          "truncate_exp_transform: input must lie in [0, 1], found " +
          std::to_string(w));
    v.values[idx] = std::exp(A * std::max(0.5, w));
  }
  return v;
}

ImprovementReport improvement_from_above_check(const GridFunction& u,
                                               double mu) {
  if (!(mu > 0.0) || mu >= 1.0)
    throw std::invalid_argument("improvement check: mu must lie in (0, 1)");
  Cylinder q1 = centered_cylinder(1.0, 1.0);
  Cylinder q_half = centered_cylinder(0.5, 0.5);
  auto full = range_over(u, q1);
  if (full[1] > 1.0 + 1e-9)
    throw std::invalid_argument(
        "improvement_from_above_check: u must not exceed 1 on Q_1");
  ImprovementReport rep;
  rep.mu = mu;
  rep.fraction = sublevel_measure(u, 0.5, q1) / region_measure(u, q1);
  rep.hypothesis_met = rep.fraction >= mu;
  rep.theta_hat = 1.0 - range_over(u, q_half)[1];
  return rep;
}

ImprovementReport improvement_from_below_check(const GridFunction& u,
                                               double mu) {
  if (!(mu > 0.0) || mu >= 1.0)
    throw std::invalid_argument("improvement check: mu must lie in (0, 1)");
  Cylinder q1 = centered_cylinder(1.0, 1.0);
  Cylinder q_half = centered_cylinder(0.5, 0.5);
  auto full = range_over(u, q1);
  if (full[0] < -1e-9)
    throw std::invalid_argument(
        "improvement_from_below_check: u must be non-negative on Q_1");
  ImprovementReport rep;
  rep.mu = mu;
  rep.fraction = superlevel_measure(u, 0.5, q1) / region_measure(u, q1);
  rep.hypothesis_met = rep.fraction >= mu;
  rep.theta_hat = range_over(u, q_half)[0];
  return rep;
}

HoelderReport oscillation_decay(const GridFunction& u, const Vec2& center,
                                double t0, int k_min, int k_max) {
  if (k_min < 0 || k_max < k_min)
    throw std::invalid_argument("oscillation_decay: need 0 <= k_min <= k_max");
  const double floor_osc = 10.0 * contact_tolerance(u.grid->h());
  HoelderReport rep;
  rep.center = center;
  rep.t0 = t0;
  for (int k = k_min; k <= k_max; ++k) {
    double r = std::ldexp(1.0, -k);
    Cylinder cyl;
    cyl.center = center;
    cyl.t_top = t0;
    cyl.radius = r;
    cyl.depth = r;
    double osc = oscillation(u, cyl);
    if (osc > floor_osc) {
      rep.scales.push_back(r);
      rep.oscillations.push_back(osc);
    }
  }
  if (rep.scales.size() < 3)
    throw std::runtime_error(
        "oscillation_decay: fewer than 3 scales rise above the resolution "
        "floor; refine the grid or move the center");

  // Least squares for log osc = c + alpha log r.
  const size_t n = rep.scales.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double lx = std::log(rep.scales[i]);
    double ly = std::log(rep.oscillations[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-14)
    throw std::runtime_error("oscillation_decay: degenerate scale spread");
  rep.fitted_alpha = (n * sxy - sx * sy) / denom;
  double intercept = (sy - rep.fitted_alpha * sx) / n;
  double worst = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double pred = intercept + rep.fitted_alpha * std::log(rep.scales[i]);
    worst = std::max(worst, std::abs(std::log(rep.oscillations[i]) - pred));
  }
  rep.fit_residual = worst;
  return rep;
}

}  // namespace pmelab
