#include "pmelab/abp.hpp"

#include <cmath>
#include <stdexcept>

#include "pmelab/errors.hpp"

namespace pmelab {

AbpParams make_params(const EllipticityInterval& ell, int n) {
  if (n != 1 && n != 2) throw std::invalid_argument("make_params: n must be 1 or 2");
  AbpParams p;
  p.ell = ell;
  p.n = n;
  p.alpha_c = 100.0 * std::max(1.0, 1.0 / ell.lambda);
  p.m = std::min(1.0, 1.0 / (n * ell.Lambda));
  p.tau = static_cast<double>(n);
  p.R = 5.0 * std::sqrt(static_cast<double>(n));
  p.T = 2.0 * n;
  p.M_bound = p.alpha_c;
  p.eta = 0.0;
  if (p.R - 1.0 < 2.0 * std::sqrt(p.tau + 1.0))
    throw std::logic_error("make_params: R - 1 >= 2 sqrt(tau + 1) failed");
  if (p.alpha_c < 1.0 || p.m > 1.0)
    throw std::logic_error("make_params: constant invariants failed");
  return p;
}

namespace {

Cylinder time_window(const AbpParams& params, double radius, double t_top) {
  Cylinder region;
  region.center = {0.0, 0.0};
  region.radius = radius;
  region.t_top = t_top;
  region.depth = t_top;  // (0, t_top]
  return region;
}

}  // namespace

LocalizationReport localization_check(const GridFunction& u,
                                      const AbpParams& params) {
  const SpaceTimeGrid& g = *u.grid;
  // Search over the full hypothesis window; the localization claim is that
  // contacts nevertheless land in B_{1/4} x (0, 1].
  Cylinder region = time_window(
      params, params.R, std::min(2.0 * params.tau + 2.0, g.t_end()));
  ContactSet cs = contact_set(u, {{{0.0, 0.0}, 0.0}}, params.alpha_c,
                              params.alpha_c, region);
  if (cs.entries.empty())
    throw HypothesisViolation(
        "localization_check: empty contact set (contact hypothesis violated)");
  LocalizationReport rep;
  rep.contacts = cs;
  for (const auto& e : cs.entries) {
    if (e.u_value > params.m + cs.eps_c) rep.hypothesis_met = false;
    double r2 = e.x[0] * e.x[0] + (g.dim() == 2 ? e.x[1] * e.x[1] : 0.0);
    bool inside = r2 <= 0.0625 + 1e-12 && e.t > 0.0 && e.t <= 1.0 + 1e-12;
    if (!inside) rep.all_localized = false;
  }
  return rep;
}

namespace {

AbpReport measure_estimate(const GridFunction& u, const AbpParams& params,
                           int k, double t_top, double eps_c) {
  const SpaceTimeGrid& g = *u.grid;
  const double scale = std::ldexp(1.0, -k);  // 2^{-k}
  Cylinder region = time_window(params, scale * params.R, t_top);
  ContactSet cs = contact_set(u, {{{0.0, 0.0}, 0.0}},
                              params.alpha_c / scale, params.alpha_c, region,
                              eps_c);
  if (cs.entries.empty())
    throw HypothesisViolation(
        "abp_measure_estimate: empty contact set (contact hypothesis violated)");
  AbpReport rep;
  rep.k = k;
  rep.alpha = params.alpha_c;
  rep.m = params.m;
  rep.M_bound = params.M_bound;
  rep.eta_fitted = params.eta;
  rep.contacts = cs.entries;
  const double threshold = scale * params.m + cs.eps_c;
  for (const auto& e : cs.entries)
    if (e.u_value > threshold) rep.elliptic_regime = true;
  double total = region_measure(u, region);
  // Conjugated level: {v <= M} in the rescaled frame is {u <= 2^{-k} M} here.
  double sub = sublevel_measure(u, std::ldexp(params.M_bound, -k), region);
  rep.sublevel_fraction = total > 0.0 ? sub / total : 0.0;
  rep.passed = rep.elliptic_regime && rep.sublevel_fraction >= params.eta;
  return rep;
}

}  // namespace

AbpReport abp_measure_estimate(const GridFunction& u, const AbpParams& params) {
  return measure_estimate(u, params, 0, std::min(1.0, u.grid->t_end()), 0.0);
}

AbpReport rescaled_abp(const GridFunction& u, int k, const AbpParams& params,
                       double eps_c) {
  if (k < 0) throw std::invalid_argument("rescaled_abp: k must be >= 0");
  const double scale = std::ldexp(1.0, -k);
  double t_top = std::min(scale * (2.0 * params.tau + 2.0), u.grid->t_end());
  double eps = eps_c > 0.0
                   ? eps_c
                   : std::ldexp(contact_tolerance(u.grid->h()), k);  // 2^k eps
  return measure_estimate(u, params, k, t_top, eps);
}

}  // namespace pmelab
