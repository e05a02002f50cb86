#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "pmelab/grid.hpp"
#include "pmelab/pucci.hpp"

namespace pmelab {

using BoundaryFn = std::function<double(const Vec2&, double)>;

// Explicit monotone forward-Euler configuration for
//   du/dt = max(u,0) * discrete_pucci(u, sign) + b |Du|^2_godunov,
// with Dirichlet data on the stencil-width boundary layer.
struct SolverConfig {
  EllipticityInterval ell;
  double b_coeff = 1.0;  // must lie in [lambda, Lambda]
  PucciSign sign = PucciSign::Plus;
  DirectionStencil stencil = DirectionStencil::axis(1);
  double cfl_safety = 0.9;  // in (0, 1]
  BoundaryFn boundary;      // Dirichlet source g(x, t)
  // Optional hard cap on the step size (plumbing for experiments whose
  // post-processing needs finer time resolution than stability alone).
  double max_dt = std::numeric_limits<double>::infinity();

  void validate(int dim) const;
};

struct Trajectory {
  GridFunction u;                       // all completed slices
  std::vector<double> snapshot_times;   // requested times
  std::vector<int> snapshot_indices;    // nearest completed slice per request
};

// Largest stable step for the slice:
//   cfl_safety * h^2 / (2 K Lambda max(u) + 2 h b G + 1e-12),
// K = number of stencil directions, G = max over nodes of
// sum_i (|D_i^+ u| + |D_i^- u|); additionally capped by cfg.max_dt and by
// `remaining` when given.
double cfl_dt(const double* slice, const SpaceTimeGrid& grid,
              const SolverConfig& cfg,
              double remaining = std::numeric_limits<double>::infinity());

// One forward-Euler step from the slice at time t to time t + dt. Interior
// nodes use the monotone update; boundary-layer nodes take cfg.boundary at
// t + dt. Throws if dt exceeds the stability bound or a non-finite value
// appears (naming the node).
std::vector<double> step(const std::vector<double>& slice, double t, double dt,
                         const SpaceTimeGrid& grid, const SolverConfig& cfg);

// March from the single-slice initial GridFunction to t_final with adaptive
// steps (or the prescribed list), storing every completed slice. Snapshot
// requests resolve to the nearest completed step time.
Trajectory solve(const GridFunction& initial, const SolverConfig& cfg,
                 double t_final, const std::vector<double>& snapshot_times = {},
                 const std::vector<double>* prescribed_dts = nullptr);

// Godunov upwind Hamiltonian sum_i [ (D_i^+ u)_+^2 + (D_i^- u)_-^2 ] at one
// interior node of a slice.
double godunov_hamiltonian(const double* slice, int i, int j, int nx, int dim,
                           double h);

// r = D_t u - [ max(u,0) discrete_pucci(u, -) + lambda H(u) ] with backward
// time differences; r >= -tol on computable nodes certifies a discrete
// supersolution. Non-computable nodes (boundary layer, first slice) are 0.
GridFunction residual_supersolution(const GridFunction& u,
                                    const EllipticityInterval& ell,
                                    const DirectionStencil& stencil);

/// Dual: r = D_t u - [ max(u,0) discrete_pucci(u, +) + Lambda H(u) ];
// r <= tol certifies a discrete subsolution.
GridFunction residual_subsolution(const GridFunction& u,
                                  const EllipticityInterval& ell,
                                  const DirectionStencil& stencil);

// Minimum of the supersolution residual over computable nodes.
double min_supersolution_residual(const GridFunction& u,
                                  const EllipticityInterval& ell,
                                  const DirectionStencil& stencil);

// Per-node coefficient fields in [lambda, Lambda] (test-family generator for
// variable-coefficient supersolution runs; 1-d diffusion coefficient a(x)
// and gradient coefficient b(x)).
struct CoefficientField {
  std::vector<double> a;
  std::vector<double> b;
};

CoefficientField sample_coefficient_field(const SpaceTimeGrid& grid,
                                          const EllipticityInterval& ell,
                                          std::uint64_t seed);

// Forward-Euler march of du/dt = max(u,0) a(x) d2u + b(x) H(u); every output
// is a discrete supersolution for the interval [lambda, Lambda]. Dim 1 only.
Trajectory solve_variable_coefficients(const GridFunction& initial,
                                       const CoefficientField& field,
                                       const SolverConfig& cfg,
                                       double t_final);

// Boundary source that freezes the initial slice in time.
BoundaryFn frozen_boundary(const GridFunction& initial);

}  // namespace pmelab
