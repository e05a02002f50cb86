#include "pmelab/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "pmelab/errors.hpp"
#include "pmelab/paraboloid.hpp"

namespace pmelab {

namespace {

// Containment in (lo, hi] with the same relative tolerance convention as
// Cylinder::contains_time.
bool in_window(double t, double lo, double hi) {
  double tol = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
  return t > lo + tol && t <= hi + tol;
}

}  // namespace

std::array<double, 2> dyadic_time_interval(int k, double tau, double shift) {
  if (k < 0) throw std::invalid_argument("dyadic_time_interval: k must be >= 0");
  if (k == 0) return {shift, shift + 1.0};
  double ti = shift - tau * (2.0 - std::ldexp(1.0, 1 - k));
  double tf = ti + std::ldexp(2.0 * tau + 2.0, -k);
  return {ti, tf};
}

DyadicCube root_cube(double shift) {
  DyadicCube q;
  q.k = 0;
  q.center = {0.0, 0.0};
  q.side = 1.0;
  q.t_i = shift;
  q.t_f = shift + 1.0;
  return q;
}

std::vector<DyadicCube> decompose(const DyadicCube& cube, int dim, double tau,
                                  double shift) {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("decompose: dim must be 1 or 2");
  auto window = dyadic_time_interval(cube.k + 1, tau, shift);
  const double off = cube.side / 4.0;
  const int n = dim == 1 ? 2 : 4;
  std::vector<DyadicCube> children;
  children.reserve(n);
  for (int c = 0; c < n; ++c) {
    DyadicCube child;
    child.k = cube.k + 1;
    child.side = cube.side / 2.0;
    child.center = cube.center;
    child.center[0] += (c & 1) ? off : -off;
    if (dim == 2) child.center[1] += (c & 2) ? off : -off;
    child.t_i = window[0];
    child.t_f = window[1];
    children.push_back(child);
  }
  return children;
}

SelectionResult select(const GridFunction& u, const AbpParams& params,
                       int k_max, double shift) {
  if (k_max < 0) throw std::invalid_argument("select: k_max must be >= 0");
  if (shift < 0.0 || shift > 0.5 + 1e-12)
    throw std::invalid_argument("select: shift must lie in [0, 1/2]");
  const SpaceTimeGrid& g = *u.grid;
  const int dim = g.dim();
  const double eps0 = contact_tolerance(g.h());
  if (g.t_start() > shift - 2.0 * params.tau + 1e-9 ||
      g.t_end() < shift + 1.0 - 1e-9)
    throw std::invalid_argument(
        "select: grid times must cover [shift - 2 tau, shift + 1]");

  SelectionResult res;
  res.shift = shift;

  std::deque<DyadicCube> live;
  live.push_back(root_cube(shift));
  while (!live.empty()) {
    DyadicCube q = live.front();
    live.pop_front();
    const double scale = std::ldexp(1.0, -q.k);  // 2^{-k}
    const double eps_k = std::ldexp(eps0, q.k);

    Cylinder region;
    region.center = q.center;
    region.t_top = q.t_f;
    region.radius = scale * params.R;
    region.depth = q.t_f - q.t_i;

    ContactSet cs =
        contact_set(u, {{q.center, q.t_i}}, params.alpha_c / scale,
                    params.alpha_c, region, eps_k);
    if (cs.entries.empty()) {
      std::string where = "x=" + std::to_string(q.center[0]);
      if (dim == 2) where += ", y=" + std::to_string(q.center[1]);
      throw HypothesisViolation(
          "select: empty contact set for the generation-" +
          std::to_string(q.k) + " cube at " + where + ", window (" +
          std::to_string(q.t_i) + ", " + std::to_string(q.t_f) + "]");
    }

    double max_u = cs.entries.front().u_value;
    for (const auto& e : cs.entries) max_u = std::max(max_u, e.u_value);
    const double threshold = scale * params.m + eps_k;

    CubeRecord rec;
    rec.cube = q;
    rec.max_contact_value = max_u;
    rec.threshold = threshold;
    if (max_u > threshold) {
      rec.status = "selected";
      res.selected.push_back(q);
      res.union_measure += std::ldexp(1.0, -q.k * dim);  // side^dim, exact
    } else if (q.k >= k_max) {
      rec.status = "unresolved_at_kmax";
    } else {
      rec.status = "descended";
      for (auto& child : decompose(q, dim, params.tau, shift))
        live.push_back(child);
    }
    res.visited.push_back(std::move(rec));
  }

  res.zero_slice_index = g.nearest_time_index(shift - 2.0 * params.tau);
  Cube unit;
  unit.center = {0.0, 0.0};
  unit.side = 1.0;
  res.zero_set_measure =
      spatial_sublevel_measure(u, res.zero_slice_index, eps0, unit);

  if (res.union_measure > 0.5)
    res.alternative = Alternative::UnionBig;
  else if (res.zero_set_measure >= 0.5)
    res.alternative = Alternative::ZeroSetBig;
  else
    res.alternative = res.union_measure > res.zero_set_measure
                          ? Alternative::UnionBig
                          : Alternative::ZeroSetBig;
  return res;
}

namespace {

double max_prefix_density(const GridFunction& u, int spatial, double M,
                          double t_lo, double horizon) {
  const SpaceTimeGrid& g = *u.grid;
  double wsum = 0.0, num = 0.0, best = 0.0;
  for (int k = 0; k < g.time_count(); ++k) {
    double t = g.time(k);
    if (!in_window(t, t_lo, horizon)) continue;
    wsum += g.slice_weight(k);
    if (u.at(spatial, k) <= M) num += g.slice_weight(k);
    if (wsum > 0.0) best = std::max(best, num / wsum);
  }
  return best;
}

// Measured sublevel time-weight over (region_bottom, t*], where t* is the
// latest time in (bottom, horizon] whose prefix density on (bottom, t*]
// clears eta with positive sublevel weight; zero when no prefix qualifies.
// Raising the level grows every prefix density and every measured weight, so
// the result is nondecreasing in the level.
double certified_window_weight(const GridFunction& u, int spatial,
                               double level, double region_bottom,
                               double bottom, double horizon, double eta) {
  const SpaceTimeGrid& g = *u.grid;
  double full = 0.0;            // sublevel weight over (region_bottom, t]
  double wsum = 0.0, num = 0.0; // window and sublevel weight over (bottom, t]
  double credit = 0.0;
  for (int k = 0; k < g.time_count(); ++k) {
    double t = g.time(k);
    if (!in_window(t, region_bottom, horizon)) continue;
    double w = g.slice_weight(k);
    bool sub = u.at(spatial, k) <= level;
    if (sub) full += w;
    if (!in_window(t, bottom, horizon)) continue;
    wsum += w;
    if (sub) num += w;
    if (num > 0.0 && num >= eta * wsum) credit = full;
  }
  return credit;
}

// Greedy Vitali pass over intervals; returns indices of the kept (pairwise
// disjoint) members, largest first by length.
std::vector<int> vitali_keep_indices(const std::vector<Interval>& family) {
  std::vector<int> order(family.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Interval& A = family[a];
    const Interval& B = family[b];
    if (A.length() != B.length()) return A.length() > B.length();
    if (A.lo != B.lo) return A.lo < B.lo;
    if (A.hi != B.hi) return A.hi < B.hi;
    return a < b;
  });
  std::vector<int> kept;
  for (int idx : order) {
    bool overlaps = false;
    for (int j : kept) {
      if (family[idx].lo < family[j].hi && family[j].lo < family[idx].hi) {
        overlaps = true;
        break;
      }
    }
    if (!overlaps) kept.push_back(idx);
  }
  return kept;
}

// Diluted space-time sublevel fraction of a cube: sublevel weight inside
// Q x (t_i, t_f] against all of Q's nodes over the anchored window
// (bottom, t_f]. For k >= 1 the anchored window has length 2^{-k}(4 tau + 2),
// so the ideal dilution ratio is (2 tau + 2)/(4 tau + 2); using the discrete
// slice weights keeps the node-column Chebyshev argument exact.
double diluted_cube_fraction(const GridFunction& u, const DyadicCube& q,
                             double level, double bottom) {
  const SpaceTimeGrid& g = *u.grid;
  Cube box;
  box.center = q.center;
  box.side = q.side;
  long nodes = 0;
  for (int i = 0; i < g.spatial_count(); ++i)
    if (box.contains(g.dim(), g.position(i))) ++nodes;
  double anchored_weight = 0.0;
  double sublevel = 0.0;
  for (int k = 0; k < g.time_count(); ++k) {
    double t = g.time(k);
    if (!in_window(t, bottom, q.t_f)) continue;
    anchored_weight += g.slice_weight(k);
    if (!in_window(t, q.t_i, q.t_f)) continue;
    double w = g.slice_weight(k);
    if (w == 0.0) continue;
    for (int i = 0; i < g.spatial_count(); ++i) {
      if (!box.contains(g.dim(), g.position(i))) continue;
      if (u.at(i, k) <= level) sublevel += w;
    }
  }
  if (nodes == 0 || anchored_weight <= 0.0) return 0.0;
  return sublevel / (static_cast<double>(nodes) * anchored_weight);
}

double sublevel_threshold(const AbpParams& params, int k, double eps0) {
  return std::ldexp(params.M_bound, -k) + std::ldexp(eps0, k);
}

}  // namespace

double time_sublevel_density(const GridFunction& u, int spatial, double M,
                             double t_lo, double t_hi) {
  const SpaceTimeGrid& g = *u.grid;
  if (spatial < 0 || spatial >= g.spatial_count())
    throw std::invalid_argument("time_sublevel_density: bad spatial index");
  if (!(t_hi > t_lo))
    throw std::invalid_argument("time_sublevel_density: empty window");
  double wsum = 0.0, num = 0.0;
  for (int k = 0; k < g.time_count(); ++k) {
    double t = g.time(k);
    if (!in_window(t, t_lo, t_hi)) continue;
    wsum += g.slice_weight(k);
    if (u.at(spatial, k) <= M) num += g.slice_weight(k);
  }
  return wsum > 0.0 ? num / wsum : 0.0;
}

double theta_density(const GridFunction& u, int spatial, double M, double t_lo,
                     double horizon) {
  const SpaceTimeGrid& g = *u.grid;
  if (spatial < 0 || spatial >= g.spatial_count())
    throw std::invalid_argument("theta_density: bad spatial index");
  if (!(horizon > t_lo))
    throw std::invalid_argument("theta_density: empty window");
  return max_prefix_density(u, spatial, M, t_lo, horizon);
}

std::vector<Interval> vitali_disjoint(std::vector<Interval> family) {
  for (const auto& I : family)
    if (!std::isfinite(I.lo) || !std::isfinite(I.hi) || I.hi < I.lo)
      throw std::invalid_argument("vitali_disjoint: malformed interval");
  std::vector<Interval> kept;
  for (int idx : vitali_keep_indices(family)) kept.push_back(family[idx]);
  return kept;
}

std::vector<int> vitali_disjoint_balls(const std::vector<BallRegion>& family,
                                       int dim) {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("vitali_disjoint_balls: dim must be 1 or 2");
  std::vector<int> order(family.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const BallRegion& A = family[a];
    const BallRegion& B = family[b];
    if (A.radius != B.radius) return A.radius > B.radius;
    if (A.center[0] != B.center[0]) return A.center[0] < B.center[0];
    if (A.center[1] != B.center[1]) return A.center[1] < B.center[1];
    return a < b;
  });
  std::vector<int> kept;
  for (int idx : order) {
    bool overlaps = false;
    for (int j : kept) {
      double dx = family[idx].center[0] - family[j].center[0];
      double dy = dim == 2 ? family[idx].center[1] - family[j].center[1] : 0.0;
      double rr = family[idx].radius + family[j].radius;
      if (dx * dx + dy * dy < rr * rr) {
        overlaps = true;
        break;
      }
    }
    if (!overlaps) kept.push_back(idx);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

FixedTimeReport fixed_time_estimate(const GridFunction& u,
                                    const AbpParams& params, int k_max,
                                    double shift, double eta_override) {
  FixedTimeReport rep;
  rep.selection = select(u, params, k_max, shift);
  const SpaceTimeGrid& g = *u.grid;
  const int dim = g.dim();
  const double eps0 = contact_tolerance(g.h());
  const double bottom = shift - 2.0 * params.tau;

  if (rep.selection.alternative == Alternative::ZeroSetBig) {
    rep.alternative = FixedTimeAlternative::ZeroSet;
    rep.measure = rep.selection.zero_set_measure;
    return rep;
  }

  rep.alternative = FixedTimeAlternative::Density;
  for (const DyadicCube& q : rep.selection.selected) {
    double level = sublevel_threshold(params, q.k, eps0);
    rep.cube_fractions.push_back(diluted_cube_fraction(u, q, level, bottom));
  }

  double eta = 0.0;
  if (eta_override >= 0.0) {
    eta = eta_override;
  } else if (params.eta > 0.0) {
    eta = params.eta;
  } else if (!rep.cube_fractions.empty()) {
    eta = *std::min_element(rep.cube_fractions.begin(),
                            rep.cube_fractions.end()) /
          2.0;
  }
  rep.eta_theta = eta;

  // The per-cube density certificate propagates to the dilated ball
  // B_{2^{-k} R}(center); a Vitali pass keeps a disjoint subfamily so node
  // counts never double up.
  std::vector<BallRegion> balls;
  balls.reserve(rep.selection.selected.size());
  for (const DyadicCube& q : rep.selection.selected) {
    BallRegion b;
    b.center = q.center;
    b.radius = std::ldexp(params.R, -q.k);
    balls.push_back(b);
  }
  rep.kept_balls = vitali_disjoint_balls(balls, dim);

  double measure = 0.0;
  for (int idx : rep.kept_balls) {
    const DyadicCube& q = rep.selection.selected[idx];
    const BallRegion& ball = balls[idx];
    double level = sublevel_threshold(params, q.k, eps0);
    Cylinder probe;
    probe.center = ball.center;
    probe.radius = ball.radius;
    long count = 0;
    for (int i = 0; i < g.spatial_count(); ++i) {
      if (!probe.contains_space(dim, g.position(i))) continue;
      double th = max_prefix_density(u, i, level, bottom, q.t_f);
      if (th > 0.0 && th >= eta) ++count;
    }
    measure += static_cast<double>(count) * g.cell_volume();
  }
  rep.measure = measure;
  return rep;
}

IntegrateReport integrate_in_time(const GridFunction& u,
                                  const AbpParams& params, int k_max,
                                  int n_shifts) {
  if (n_shifts < 1)
    throw std::invalid_argument("integrate_in_time: need at least one shift");
  const SpaceTimeGrid& g = *u.grid;
  const int dim = g.dim();
  const double eps0 = contact_tolerance(g.h());
  const double tau = params.tau;
  if (g.t_start() > -2.0 * tau + 1e-9 || g.t_end() < 1.5 - 1e-9)
    throw std::invalid_argument(
        "integrate_in_time: grid times must cover [-2 tau, 1.5]");

  IntegrateReport rep;
  rep.M = params.M_bound;
  rep.shifts = n_shifts;

  const double shift_weight = 0.5 / n_shifts;  // midpoint rule on [0, 1/2]
  struct ShiftOutcome {
    double shift;
    SelectionResult sel;
  };
  std::vector<ShiftOutcome> outcomes;
  outcomes.reserve(n_shifts);
  double zero_weight = 0.0;
  for (int j = 0; j < n_shifts; ++j) {
    double s = (j + 0.5) * (0.5 / n_shifts);
    SelectionResult sel = select(u, params, k_max, s);
    if (sel.alternative == Alternative::ZeroSetBig) zero_weight += shift_weight;
    outcomes.push_back({s, std::move(sel)});
  }
  rep.zero_shift_weight = zero_weight;
  rep.zero_route = zero_weight >= 0.25 - 1e-12;

  Cylinder region;
  region.center = {0.0, 0.0};
  region.t_top = 1.0;
  region.radius = params.R;
  region.depth = 2.0 * tau + 1.0;
  rep.region_measure = region_measure(u, region);

  const double region_bottom = -2.0 * tau;
  if (rep.zero_route) {
    // Most shifts land on the degenerate alternative: the sublevel set at the
    // contact floor is measured directly over the whole reporting region.
    rep.bounded_set_measure = sublevel_measure(u, eps0, region);
  } else {
    double min_fraction = std::numeric_limits<double>::infinity();
    for (const auto& oc : outcomes) {
      if (oc.sel.alternative != Alternative::UnionBig) continue;
      double bottom = oc.shift - 2.0 * tau;
      for (const DyadicCube& q : oc.sel.selected) {
        double level = sublevel_threshold(params, q.k, eps0);
        min_fraction = std::min(
            min_fraction, diluted_cube_fraction(u, q, level, bottom));
      }
    }
    double eta = params.eta > 0.0
                     ? params.eta
                     : (std::isfinite(min_fraction) ? min_fraction / 2.0 : 0.0);
    rep.eta_theta = eta;

    // Fubini in space: each node inside B_R that sits in the dilated ball of
    // a selected cube carries a density certificate on a prefix window. Per
    // node the heaviest certified window is credited with its measured
    // sublevel weight — a disjoint (single-interval) subfamily of the
    // candidate windows — so the total is an exact lower bound for the
    // sublevel measure in the region and is nondecreasing in M for a fixed
    // eta. Horizons clip at t = 1 so every window stays inside the region.
    double total = 0.0;
    for (int i = 0; i < g.spatial_count(); ++i) {
      Vec2 x = g.position(i);
      if (!region.contains_space(dim, x)) continue;
      double best = 0.0;
      for (const auto& oc : outcomes) {
        double bottom = oc.shift - 2.0 * tau;
        if (oc.sel.alternative == Alternative::ZeroSetBig) {
          best = std::max(best, certified_window_weight(u, i, eps0,
                                                        region_bottom, bottom,
                                                        1.0, eta));
          continue;
        }
        for (const DyadicCube& q : oc.sel.selected) {
          Cylinder ball;
          ball.center = q.center;
          ball.radius = std::ldexp(params.R, -q.k);
          if (!ball.contains_space(dim, x)) continue;
          double horizon = std::min(q.t_f, 1.0);
          if (!(horizon > bottom)) continue;
          double level = sublevel_threshold(params, q.k, eps0);
          best = std::max(best,
                          certified_window_weight(u, i, level, region_bottom,
                                                  bottom, horizon, eta));
        }
      }
      total += best * g.cell_volume();
    }
    rep.bounded_set_measure = total;
  }

  rep.ratio = rep.region_measure > 0.0
                  ? rep.bounded_set_measure / rep.region_measure
                  : 0.0;
  return rep;
}

}  // namespace pmelab
