#pragma once

#include <string>
#include <vector>

#include "pmelab/abp.hpp"
#include "pmelab/grid.hpp"

namespace pmelab {

// Spatial dyadic cube of generation k (side 2^{-k}) with its associated time
// window (t_i, t_f]:
//   t_i(0) = 0, t_f(0) = 1 (the root is the exception),
//   t_i(k) = t_i(k-1) - 2^{-(k-1)} tau, t_f(k) = t_i(k) + 2^{-k}(2 tau + 2).
struct DyadicCube {
  int k = 0;
  Vec2 center{0.0, 0.0};
  double side = 1.0;
  double t_i = 0.0;
  double t_f = 1.0;
};

// Closed form of the recursion: k = 0 -> (0, 1];
// k >= 1 -> t_i = -tau (2 - 2^{1-k}), t_f = t_i + 2^{-k}(2 tau + 2).
std::array<double, 2> dyadic_time_interval(int k, double tau,
                                           double shift = 0.0);

DyadicCube root_cube(double shift = 0.0);

// 2^dim children of half the side, centers offset +- side/4 per axis, time
// window from the recursion.
std::vector<DyadicCube> decompose(const DyadicCube& cube, int dim, double tau,
                                  double shift = 0.0);

enum class Alternative { UnionBig, ZeroSetBig };

struct CubeRecord {
  DyadicCube cube;
  std::string status;  // "selected" | "descended" | "unresolved_at_kmax"
  double max_contact_value = 0.0;
  double threshold = 0.0;
};

struct SelectionResult {
  std::vector<DyadicCube> selected;
  std::vector<CubeRecord> visited;
  double union_measure = 0.0;     // exact dyadic sum of selected |Q|
  double zero_set_measure = 0.0;  // node-counting |{u <= eps_c} n Q_1| at the
                                  // slice nearest -2 tau (+ shift)
  Alternative alternative = Alternative::ZeroSetBig;
  int zero_slice_index = 0;
  double shift = 0.0;
};

// Stopping-time decomposition: breadth-first over generations up to k_max.
// A live generation-k cube is selected when its conjugated contact (paraboloid
// openings (2^k alpha, alpha), vertex (center, t_i), window (t_i, t_f],
// tolerance 2^k eps_c) meets {u > 2^{-k} m + tol}; otherwise its children go
// live. Empty contact for a live cube violates the inductive hypothesis and
// throws. Alternative: UNION_BIG when the selected union exceeds 1/2,
// otherwise ZERO_SET_BIG when the bottom zero set reaches 1/2; ties fire
// ZERO_SET_BIG; if neither threshold is met the larger measured quantity
// decides (ties again to ZERO_SET_BIG).
SelectionResult select(const GridFunction& u, const AbpParams& params,
                       int k_max = 6, double shift = 0.0);

// One-dimensional time density of {u(x, .) <= M} over (t_lo, t_hi],
// slice-weighted.
double time_sublevel_density(const GridFunction& u, int spatial, double M,
                             double t_lo, double t_hi);

// Theta_M(x) = sup over horizons t in (t_lo, horizon] of the prefix density
// |{u(x,.) <= M} n (t_lo, t]| / |t - t_lo|.
double theta_density(const GridFunction& u, int spatial, double M,
                     double t_lo, double horizon);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

// Greedy largest-first disjoint subfamily; the selected lengths sum to at
// least |union| / 3.
std::vector<Interval> vitali_disjoint(std::vector<Interval> family);

struct BallRegion {
  Vec2 center{0.0, 0.0};
  double radius = 0.0;
};

// Same greedy rule for balls (factor 3^dim); returns indices kept.
std::vector<int> vitali_disjoint_balls(const std::vector<BallRegion>& family,
                                       int dim);

enum class FixedTimeAlternative { ZeroSet, Density };

struct FixedTimeReport {
  FixedTimeAlternative alternative = FixedTimeAlternative::ZeroSet;
  double measure = 0.0;     // zero-set measure, or |{theta_k >= eta} n balls|
  double eta_theta = 0.0;   // density threshold used (fitted eta halved)
  SelectionResult selection;
  std::vector<double> cube_fractions;  // per selected cube: diluted space-time
                                       // sublevel fraction of {u <= M}
  std::vector<int> kept_balls;         // vitali survivors (into selected)
};

// Converts the selection into a fixed-time statement: either the bottom zero
// set is large, or the per-cube densities theta_k exceed a positive threshold
// on a set of positive measure. Each selected cube certifies density on its
// dilated ball B_{2^{-k} R}(center); nodes are counted over a vitali-disjoint
// subfamily of those balls. eta_override >= 0 forces the density threshold;
// otherwise it is fitted as half the smallest per-cube fraction
// (params.eta > 0 takes precedence).
FixedTimeReport fixed_time_estimate(const GridFunction& u,
                                    const AbpParams& params, int k_max = 6,
                                    double shift = 0.0,
                                    double eta_override = -1.0);

struct IntegrateReport {
  double bounded_set_measure = 0.0;  // pipeline lower bound of |{u <= M}|
  double region_measure = 0.0;       // |B_R x (-2 tau, 1]|
  double ratio = 0.0;
  double M = 0.0;
  double eta_theta = 0.0;
  int shifts = 0;
  double zero_shift_weight = 0.0;  // total weight of ZERO_SET shifts
  bool zero_route = false;
};

// Time integration across shifts in [0, 1/2]: classifies each shifted
// selection, then takes one of two routes to a lower bound for the sublevel
// measure inside B_R x (-2 tau, 1]. Zero route (zero-set shifts carry weight
// >= 1/4): the contact-floor sublevel set is measured directly over the
// region. Density route: every node covered by a selected cube's dilated ball
// whose prefix density clears eta contributes the measured sublevel weight of
// its heaviest certified window, so the total never exceeds the true sublevel
// measure and never shrinks when M grows (at fixed eta). The grid must cover
// times up to 1 + 1/2 so every shifted cube window stays inside the data.
IntegrateReport integrate_in_time(const GridFunction& u,
                                  const AbpParams& params, int k_max = 6,
                                  int n_shifts = 17);

}  // namespace pmelab
