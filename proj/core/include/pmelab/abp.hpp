#pragma once

#include <optional>
#include <vector>

#include "pmelab/paraboloid.hpp"
#include "pmelab/pucci.hpp"

namespace pmelab {

// Constants of the contact-measure machinery in dimension n for the
// ellipticity interval [lambda, Lambda]:
//   alpha_c = 100 max(1, 1/lambda), m = min(1, 1/(n Lambda)),
//   tau = n, R = 5 sqrt(n), T = 2n.
// M_bound and eta are fitted empirically by the harness and reported, never
// asserted a priori. Invariants: R - 1 >= 2 sqrt(tau + 1), alpha_c >= 1,
// m <= 1.
struct AbpParams {
  EllipticityInterval ell;
  int n = 1;
  double alpha_c = 100.0;
  double m = 1.0;
  double tau = 1.0;
  double R = 5.0;
  double T = 2.0;
  double M_bound = 100.0;
  double eta = 0.0;
};

AbpParams make_params(const EllipticityInterval& ell, int n);

struct LocalizationReport {
  ContactSet contacts;
  bool hypothesis_met = true;  // every contact value <= m (+ eps_c)
  bool all_localized = true;   // every contact inside B_{1/4} x (0, 1]
};

// Contacts of P^{alpha_c, alpha_c} with vertex (0, 0) searched over the grid;
// checks that they localize in B_{1/4} x (0, 1]. Throws on an empty contact
// set (contact hypothesis violated).
LocalizationReport localization_check(const GridFunction& u,
                                      const AbpParams& params);

struct AbpReport {
  int k = 0;
  double alpha = 0.0;
  double m = 0.0;
  double M_bound = 0.0;
  double eta_fitted = 0.0;
  std::vector<ContactEntry> contacts;
  bool elliptic_regime = false;
  double sublevel_fraction = 0.0;
  bool passed = false;
};

// Contact of P^{alpha_c, alpha_c} at (0,0) over B_R x (0, 1]. If some contact
// value exceeds m (+ eps_c) the run is in the elliptic regime and the
// sublevel fraction |{u <= M_bound} n region| / |region| is compared with
// eta. Otherwise the estimate defers to the dyadic refinement
// (elliptic_regime = false). Throws on an empty contact set.
AbpReport abp_measure_estimate(const GridFunction& u, const AbpParams& params);

// Generation-k version: openings (2^k alpha_c, alpha_c), elliptic threshold
// 2^{-k} m, region B_{2^{-k} R} x (0, 2^{-k}(2 tau + 2)]. Contact tolerance
// defaults to the conjugated one 2^k * contact_tolerance(h); pass eps_c > 0
// to override. k = 0 differs from abp_measure_estimate only by the
// time-interval convention.
AbpReport rescaled_abp(const GridFunction& u, int k, const AbpParams& params,
                       double eps_c = 0.0);

}  // namespace pmelab
