#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "pmelab/grid.hpp"
#include "pmelab/refsol.hpp"
#include "pmelab/scheme.hpp"

namespace testutil {

using namespace pmelab;

// Single-slice grid on the centered box [-half, half]^dim.
inline GridPtr slice_grid(int dim, double half, int nx, double t_start) {
  double h = 2.0 * half / (nx - 1);
  Vec2 origin{-half, dim == 2 ? -half : 0.0};
  std::array<int, 2> nodes{nx, dim == 2 ? nx : 1};
  return std::make_shared<SpaceTimeGrid>(dim, origin, nodes, h, t_start,
                                         std::vector<double>{});
}

inline SolverConfig basic_config(int dim, double lambda, double Lambda,
                                 double b, PucciSign sign) {
  SolverConfig cfg;
  cfg.ell = EllipticityInterval(lambda, Lambda);
  cfg.b_coeff = b;
  cfg.sign = sign;
  cfg.stencil =
      dim == 1 ? DirectionStencil::axis(1) : DirectionStencil::standard2d();
  return cfg;
}

// Exact-front initial data + boundary; e = dir / sqrt(b).
inline Trajectory run_front(int dim, int nx, double half, double t_start,
                            double t_final, double b = 1.0,
                            double max_dt = 0.0) {
  FrontSolution front = make_front(dim, {1.0, 0.0}, b);
  SolverConfig cfg =
      basic_config(dim, 1.0, std::max(1.0, b), b, PucciSign::Minus);
  cfg.boundary = [front](const Vec2& x, double t) { return front.value(x, t); };
  if (max_dt > 0.0) cfg.max_dt = max_dt;
  GridFunction u0 = sample(cfg.boundary, slice_grid(dim, half, nx, t_start));
  return solve(u0, cfg, t_final);
}

// Smooth nonnegative random field on [-half, half]: a low-frequency Fourier
// mix rescaled into [lo, hi].
inline std::vector<double> smooth_profile(int nx, double half,
                                          std::mt19937_64& rng, double lo,
                                          double hi) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::array<double, 4> a{}, p{};
  for (int m = 0; m < 4; ++m) {
    a[m] = coef(rng) / (1.0 + m);
    p[m] = coef(rng) * 3.141592653589793;
  }
  std::vector<double> v(nx);
  double vmin = 1e300, vmax = -1e300;
  double h = 2.0 * half / (nx - 1);
  for (int i = 0; i < nx; ++i) {
    double x = -half + i * h;
    double s = 0.0;
    for (int m = 0; m < 4; ++m)
      s += a[m] * std::cos((m + 1) * 3.141592653589793 * x / half + p[m]);
    v[i] = s;
    vmin = std::min(vmin, s);
    vmax = std::max(vmax, s);
  }
  double span = vmax - vmin > 1e-12 ? vmax - vmin : 1.0;
  for (double& s : v) s = lo + (hi - lo) * (s - vmin) / span;
  return v;
}

inline GridFunction slice_function(GridPtr g,
                                   const std::vector<double>& values1d) {
  GridFunction u(g);
  for (int i = 0; i < g->nodes(0); ++i)
    for (int j = 0; j < (g->dim() == 2 ? g->nodes(1) : 1); ++j)
      u.at(g->flat_index(i, j), 0) = values1d[i];
  return u;
}

}  // namespace testutil
