#include "pmelab/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace pmelab {

namespace {

constexpr double kDenomGuard = 1e-12;

std::string node_name(const SpaceTimeGrid& g, int i, int j, double t) {
  std::string s = "(x=" + std::to_string(g.x(0, i));
  if (g.dim() == 2) s += ", y=" + std::to_string(g.x(1, j));
  s += ", t=" + std::to_string(t) + ")";
  return s;
}

bool interior(int i, int j, int nx, int ny, int dim, int r) {
  bool ok = i >= r && i + r < nx;
  if (dim == 2) ok = ok && j >= r && j + r < ny;
  return ok;
}

}  // namespace

void SolverConfig::validate(int dim) const {
  if (!(b_coeff >= ell.lambda - 1e-15 && b_coeff <= ell.Lambda + 1e-15))
    throw std::invalid_argument("solver: b_coeff must lie in [lambda, Lambda]");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0))
    throw std::invalid_argument("solver: cfl_safety must lie in (0, 1]");
  if (!boundary) throw std::invalid_argument("solver: boundary source not set");
  if (!(max_dt > 0.0)) throw std::invalid_argument("solver: max_dt must be positive");
  stencil.validate(dim);
}

double godunov_hamiltonian(const double* slice, int i, int j, int nx, int dim,
                           double h) {
  const int c = j * nx + i;
  double acc = 0.0;
  {
    double dp = (slice[c + 1] - slice[c]) / h;
    double dm = (slice[c] - slice[c - 1]) / h;
    if (dp > 0.0) acc += dp * dp;
    if (dm < 0.0) acc += dm * dm;
  }
  if (dim == 2) {
    double dp = (slice[c + nx] - slice[c]) / h;
    double dm = (slice[c] - slice[c - nx]) / h;
    if (dp > 0.0) acc += dp * dp;
    if (dm < 0.0) acc += dm * dm;
  }
  return acc;
}

namespace {

// G = max over nodes of sum_i (|D_i^+ u| + |D_i^- u|), one-sided terms where
// they exist.
double max_gradient_sum(const double* slice, const SpaceTimeGrid& g) {
  const int nx = g.nodes(0);
  const int ny = g.dim() == 2 ? g.nodes(1) : 1;
  const double h = g.h();
  double G = 0.0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int c = j * nx + i;
      double s = 0.0;
      if (i + 1 < nx) s += std::abs(slice[c + 1] - slice[c]) / h;
      if (i > 0) s += std::abs(slice[c] - slice[c - 1]) / h;
      if (g.dim() == 2) {
        if (j + 1 < ny) s += std::abs(slice[c + nx] - slice[c]) / h;
        if (j > 0) s += std::abs(slice[c] - slice[c - nx]) / h;
      }
      G = std::max(G, s);
    }
  }
  return G;
}

double stability_bound(const double* slice, const SpaceTimeGrid& grid,
                       const SolverConfig& cfg) {
  const int n = grid.spatial_count();
  double maxu = 0.0;
  for (int i = 0; i < n; ++i) maxu = std::max(maxu, slice[i]);
  double G = max_gradient_sum(slice, grid);
  double K = static_cast<double>(cfg.stencil.directions.size());
  double denom = 2.0 * K * cfg.ell.Lambda * maxu +
                 2.0 * grid.h() * cfg.b_coeff * G + kDenomGuard;
  double dt = cfg.cfl_safety * grid.h() * grid.h() / denom;
  return std::min(dt, cfg.max_dt);
}

}  // namespace

double cfl_dt(const double* slice, const SpaceTimeGrid& grid,
              const SolverConfig& cfg, double remaining) {
  double dt = stability_bound(slice, grid, cfg);
  return std::min(dt, remaining);
}

std::vector<double> step(const std::vector<double>& slice, double t, double dt,
                         const SpaceTimeGrid& grid, const SolverConfig& cfg) {
  const int nx = grid.nodes(0);
  const int ny = grid.dim() == 2 ? grid.nodes(1) : 1;
  if (static_cast<int>(slice.size()) != nx * ny)
    throw std::invalid_argument("step: slice size does not match grid");
  double bound = stability_bound(slice.data(), grid, cfg);
  if (dt > bound * (1.0 + 1e-9))
    throw std::runtime_error("step: dt=" + std::to_string(dt) +
                             " violates the stability bound " +
                             std::to_string(bound));
  const int r = cfg.stencil.radius();
  const double tn = t + dt;
  std::vector<double> out(slice.size());
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int c = j * nx + i;
      double v;
      if (interior(i, j, nx, ny, grid.dim(), r)) {
        double dp = discrete_pucci_slice(slice.data(), i, j, nx, grid.dim(),
                                         grid.h(), cfg.ell, cfg.sign,
                                         cfg.stencil);
        double H = godunov_hamiltonian(slice.data(), i, j, nx, grid.dim(),
                                       grid.h());
        double u = slice[c];
        v = u + dt * (std::max(u, 0.0) * dp + cfg.b_coeff * H);
      } else {
        Vec2 p{grid.x(0, i), grid.dim() == 2 ? grid.x(1, j) : 0.0};
        v = cfg.boundary(p, tn);
      }
      if (!std::isfinite(v))
        throw std::runtime_error("step: non-finite value at node " +
                                 node_name(grid, i, j, tn));
      out[c] = v;
    }
  }
  return out;
}

Trajectory solve(const GridFunction& initial, const SolverConfig& cfg,
                 double t_final, const std::vector<double>& snapshot_times,
                 const std::vector<double>* prescribed_dts) {
  const SpaceTimeGrid& g0 = *initial.grid;
  if (g0.time_count() != 1)
    throw std::invalid_argument("solve: initial data must be a single slice");
  cfg.validate(g0.dim());
  const double t0 = g0.t_start();
  if (t_final < t0 - 1e-12)
    throw std::invalid_argument("solve: t_final precedes the initial time");

  std::vector<std::vector<double>> slices;
  slices.emplace_back(initial.values);
  std::vector<double> dts;
  double t = t0;
  size_t pi = 0;
  const double eps_end = 1e-12 * std::max(1.0, std::abs(t_final));
  while (t_final - t > eps_end) {
    double dt;
    if (prescribed_dts) {
      if (pi >= prescribed_dts->size())
        throw std::runtime_error("solve: prescribed step list exhausted");
      dt = (*prescribed_dts)[pi++];
    } else {
      dt = cfl_dt(slices.back().data(), g0, cfg, t_final - t);
    }
    slices.push_back(step(slices.back(), t, dt, g0, cfg));
    t += dt;
    dts.push_back(dt);
  }

  auto grid = std::make_shared<SpaceTimeGrid>(
      g0.dim(), g0.origin(), std::array<int, 2>{g0.nodes(0), g0.nodes(1)},
      g0.h(), t0, dts);
  Trajectory traj;
  traj.u = GridFunction(grid);
  traj.u.flag_non_negative = initial.flag_non_negative;
  for (int k = 0; k < grid->time_count(); ++k)
    std::copy(slices[k].begin(), slices[k].end(), traj.u.slice(k));
  traj.snapshot_times = snapshot_times;
  for (double ts : snapshot_times)
    traj.snapshot_indices.push_back(grid->nearest_time_index(ts));
  return traj;
}

namespace {

GridFunction residual(const GridFunction& u, const EllipticityInterval& ell,
                      const DirectionStencil& stencil, PucciSign sign,
                      double grad_coeff) {
  const SpaceTimeGrid& g = *u.grid;
  stencil.validate(g.dim());
  const int nx = g.nodes(0);
  const int ny = g.dim() == 2 ? g.nodes(1) : 1;
  const int r = stencil.radius();
  GridFunction out(u.grid, 0.0);
  for (int k = 1; k < g.time_count(); ++k) {
    const double dt = g.dt_list()[k - 1];
    const double* cur = u.slice(k);
    const double* prev = u.slice(k - 1);
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        if (!interior(i, j, nx, ny, g.dim(), r)) continue;
        const int c = j * nx + i;
        double dp = discrete_pucci_slice(cur, i, j, nx, g.dim(), g.h(), ell,
                                         sign, stencil);
        double H = godunov_hamiltonian(cur, i, j, nx, g.dim(), g.h());
        double Dt = (cur[c] - prev[c]) / dt;
        out.at(c, k) = Dt - (std::max(cur[c], 0.0) * dp + grad_coeff * H);
      }
    }
  }
  return out;
}

}  // namespace

GridFunction residual_supersolution(const GridFunction& u,
                                    const EllipticityInterval& ell,
                                    const DirectionStencil& stencil) {
  return residual(u, ell, stencil, PucciSign::Minus, ell.lambda);
}

GridFunction residual_subsolution(const GridFunction& u,
                                  const EllipticityInterval& ell,
                                  const DirectionStencil& stencil) {
  return residual(u, ell, stencil, PucciSign::Plus, ell.Lambda);
}

double min_supersolution_residual(const GridFunction& u,
                                  const EllipticityInterval& ell,
                                  const DirectionStencil& stencil) {
  GridFunction r = residual_supersolution(u, ell, stencil);
  const SpaceTimeGrid& g = *u.grid;
  const int nx = g.nodes(0);
  const int ny = g.dim() == 2 ? g.nodes(1) : 1;
  const int rad = stencil.radius();
  double m = 0.0;
  for (int k = 1; k < g.time_count(); ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        if (interior(i, j, nx, ny, g.dim(), rad))
          m = std::min(m, r.at(j * nx + i, k));
  return m;
}

CoefficientField sample_coefficient_field(const SpaceTimeGrid& grid,
                                          const EllipticityInterval& ell,
                                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(ell.lambda, ell.Lambda);
  CoefficientField f;
  f.a.resize(grid.spatial_count());
  f.b.resize(grid.spatial_count());
  for (double& v : f.a) v = unif(rng);
  for (double& v : f.b) v = unif(rng);
  return f;
}

Trajectory solve_variable_coefficients(const GridFunction& initial,
                                       const CoefficientField& field,
                                       const SolverConfig& cfg,
                                       double t_final) {
  const SpaceTimeGrid& g0 = *initial.grid;
  if (g0.dim() != 1)
    throw std::invalid_argument("solve_variable_coefficients: dim 1 only");
  if (g0.time_count() != 1)
    throw std::invalid_argument("solve_variable_coefficients: initial data must be a single slice");
  cfg.validate(1);
  const int nx = g0.nodes(0);
  const double h = g0.h();

  std::vector<std::vector<double>> slices;
  slices.emplace_back(initial.values);
  std::vector<double> dts;
  double t = g0.t_start();
  const double eps_end = 1e-12 * std::max(1.0, std::abs(t_final));
  while (t_final - t > eps_end) {
    const std::vector<double>& cur = slices.back();
    double dt = cfl_dt(cur.data(), g0, cfg, t_final - t);
    std::vector<double> next(cur.size());
    for (int i = 0; i < nx; ++i) {
      double v;
      if (i >= 1 && i + 1 < nx) {
        double d2 = (cur[i + 1] - 2.0 * cur[i] + cur[i - 1]) / (h * h);
        double H = godunov_hamiltonian(cur.data(), i, 0, nx, 1, h);
        v = cur[i] +
            dt * (std::max(cur[i], 0.0) * field.a[i] * d2 + field.b[i] * H);
      } else {
        v = cfg.boundary({g0.x(0, i), 0.0}, t + dt);
      }
      if (!std::isfinite(v))
        throw std::runtime_error(
            "solve_variable_coefficients: non-finite value at node " +
            node_name(g0, i, 0, t + dt));
      next[i] = v;
    }
    slices.push_back(std::move(next));
    t += dt;
    dts.push_back(dt);
  }

  auto grid = std::make_shared<SpaceTimeGrid>(
      1, g0.origin(), std::array<int, 2>{nx, 1}, h, g0.t_start(), dts);
  Trajectory traj;
  traj.u = GridFunction(grid);
  for (int k = 0; k < grid->time_count(); ++k)
    std::copy(slices[k].begin(), slices[k].end(), traj.u.slice(k));
  return traj;
}

BoundaryFn frozen_boundary(const GridFunction& initial) {
  GridPtr grid = initial.grid;
  std::vector<double> slice0(initial.values.begin(),
                             initial.values.begin() + grid->spatial_count());
  return [grid, slice0](const Vec2& x, double) {
    int i = static_cast<int>(std::lround((x[0] - grid->origin()[0]) / grid->h()));
    int j = grid->dim() == 2
                ? static_cast<int>(std::lround((x[1] - grid->origin()[1]) / grid->h()))
                : 0;
    i = std::clamp(i, 0, grid->nodes(0) - 1);
    j = std::clamp(j, 0, grid->dim() == 2 ? grid->nodes(1) - 1 : 0);
    return slice0[static_cast<size_t>(j) * grid->nodes(0) + i];
  };
}

}  // namespace pmelab
