#pragma once

#include <vector>

#include "pmelab/grid.hpp"
#include "pmelab/pucci.hpp"

namespace pmelab {

// v = exp(A max(1/2, u)) with A = 2 Lambda / lambda. Requires u in [0, 1]
// within 1e-9; the truncation makes v insensitive to values below 1/2, so v
// ranges over [exp(A/2), exp(A)].
GridFunction truncate_exp_transform(const GridFunction& u,
                                    const EllipticityInterval& ell);

struct ImprovementReport {
  bool hypothesis_met = false;  // measured fraction >= mu
  double fraction = 0.0;        // fraction of Q_1 on the favored side of 1/2
  double theta_hat = 0.0;       // observed oscillation improvement
  double mu = 0.0;
};

// Improvement from above. Requires u <= 1 (within 1e-9) on Q_1 =
// B_1 x (-1, 0]. Hypothesis: |{u <= 1/2} n Q_1| >= mu |Q_1|. Reports
// theta_hat = 1 - sup over B_{1/2} x (-1/2, 0] of u; positivity is observed,
// never asserted.
ImprovementReport improvement_from_above_check(const GridFunction& u,
                                               double mu);

// Mirror image: requires u >= 0 (within 1e-9) on Q_1, hypothesis
// |{u > 1/2} n Q_1| >= mu |Q_1|, and theta_hat = inf over B_{1/2} x
// (-1/2, 0] of u.
ImprovementReport improvement_from_below_check(const GridFunction& u,
                                               double mu);

struct HoelderReport {
  Vec2 center{0.0, 0.0};
  double t0 = 0.0;
  std::vector<double> scales;        // radii 2^{-k} that were usable
  std::vector<double> oscillations;  // osc over B_r(center) x (t0 - r, t0]
  double fitted_alpha = 0.0;         // least-squares slope of log osc vs log r
  double fit_residual = 0.0;         // max abs residual of that fit
};

// Oscillation decay across the dyadic cylinders B_{2^{-k}}(center) x
// (t0 - 2^{-k}, t0], k = k_min..k_max. A scale is usable when its
// oscillation exceeds 10 * contact_tolerance(h) (below that the numbers are
// discretization noise); at least 3 usable scales are required, otherwise the
// fit throws.
HoelderReport oscillation_decay(const GridFunction& u, const Vec2& center,
                                double t0, int k_min = 0, int k_max = 6);

}  // namespace pmelab
