#include "pmelab/pucci.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pmelab {

EllipticityInterval::EllipticityInterval(double lam, double Lam)
    : lambda(lam), Lambda(Lam) {
  if (!(lambda > 0.0) || !(Lambda >= lambda) || !std::isfinite(Lambda))
    throw std::invalid_argument(
        "EllipticityInterval: need 0 < lambda <= Lambda");
}

std::array<double, 2> SymmetricMatrix::eigenvalues() const {
  if (dim == 1) return {a11, 0.0};
  double mean = 0.5 * (a11 + a22);
  double disc = std::sqrt(0.25 * (a11 - a22) * (a11 - a22) + a12 * a12);
  return {mean - disc, mean + disc};
}

namespace {

inline double extremal_1d(double s, const EllipticityInterval& ell,
                          PucciSign sign) {
  // sign +: Lambda s+ - lambda s-;  sign -: lambda s+ - Lambda s-.
  if (sign == PucciSign::Plus)
    return s >= 0.0 ? ell.Lambda * s : ell.lambda * s;
  return s >= 0.0 ? ell.lambda * s : ell.Lambda * s;
}

}  // namespace

double pucci_plus(const SymmetricMatrix& M, const EllipticityInterval& ell) {
  auto ev = M.eigenvalues();
  double r = extremal_1d(ev[0], ell, PucciSign::Plus);
  if (M.dim == 2) r += extremal_1d(ev[1], ell, PucciSign::Plus);
  return r;
}

double pucci_minus(const SymmetricMatrix& M, const EllipticityInterval& ell) {
  SymmetricMatrix N{M.dim, -M.a11, -M.a12, -M.a22};
  return -pucci_plus(N, ell);
}

int DirectionStencil::radius() const {
  int r = 0;
  for (const auto& d : directions)
    r = std::max(r, std::max(std::abs(d[0]), std::abs(d[1])));
  return r;
}

void DirectionStencil::validate(int dim) const {
  if (directions.empty() || groups.empty())
    throw std::invalid_argument("stencil: empty");
  bool has_x = false, has_y = false;
  for (const auto& d : directions) {
    if (d[0] == 0 && d[1] == 0)
      throw std::invalid_argument("stencil: zero direction");
    if (dim == 1 && d[1] != 0)
      throw std::invalid_argument("stencil: dim-1 direction has a second component");
    if (d[0] != 0 && d[1] == 0) has_x = true;
    if (d[0] == 0 && d[1] != 0) has_y = true;
  }
  if (!has_x || (dim == 2 && !has_y))
    throw std::invalid_argument("stencil: coordinate axes must be present");
  for (size_t a = 0; a < directions.size(); ++a)
    for (size_t b = a + 1; b < directions.size(); ++b) {
      long cross = static_cast<long>(directions[a][0]) * directions[b][1] -
                   static_cast<long>(directions[a][1]) * directions[b][0];
      if (cross == 0)
        throw std::invalid_argument("stencil: parallel directions");
    }
  for (const auto& g : groups) {
    if (dim == 1) {
      if (g.size() != 1) throw std::invalid_argument("stencil: dim-1 groups are singletons");
      continue;
    }
    if (g.size() != 2) throw std::invalid_argument("stencil: dim-2 groups are pairs");
    const auto& v = directions.at(g[0]);
    const auto& w = directions.at(g[1]);
    if (v[0] * w[0] + v[1] * w[1] != 0)
      throw std::invalid_argument("stencil: group is not orthogonal");
  }
}

DirectionStencil DirectionStencil::axis(int dim) {
  DirectionStencil s;
  if (dim == 1) {
    s.directions = {{1, 0}};
    s.groups = {{0}};
  } else {
    s.directions = {{1, 0}, {0, 1}};
    s.groups = {{0, 1}};
  }
  return s;
}

DirectionStencil DirectionStencil::standard2d() {
  DirectionStencil s;
  s.directions = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
  s.groups = {{0, 1}, {2, 3}};
  return s;
}

double discrete_pucci_slice(const double* slice, int i, int j, int nx, int dim,
                            double h, const EllipticityInterval& ell,
                            PucciSign sign, const DirectionStencil& stencil) {
  const double h2 = h * h;
  double best = 0.0;
  bool first = true;
  for (const auto& group : stencil.groups) {
    double sum = 0.0;
    for (int di : group) {
      const auto& d = stencil.directions[di];
      int off = d[1] * nx + d[0];
      int c = j * nx + i;
      double num = slice[c + off] - 2.0 * slice[c] + slice[c - off];
      double len2 = static_cast<double>(d[0]) * d[0] +
                    (dim == 2 ? static_cast<double>(d[1]) * d[1] : 0.0);
      sum += extremal_1d(num / (h2 * len2), ell, sign);
    }
    if (first) {
      best = sum;
      first = false;
    } else if (sign == PucciSign::Plus) {
      best = std::max(best, sum);
    } else {
      best = std::min(best, sum);
    }
  }
  return best;
}

double discrete_pucci(const GridFunction& u, int spatial, int k,
                      const EllipticityInterval& ell, PucciSign sign,
                      const DirectionStencil& stencil) {
  const SpaceTimeGrid& g = *u.grid;
  stencil.validate(g.dim());
  int nx = g.nodes(0);
  int i = spatial % nx;
  int j = spatial / nx;
  int r = stencil.radius();
  bool ok = i >= r && i + r < nx;
  if (g.dim() == 2) ok = ok && j >= r && j + r < g.nodes(1);
  if (!ok) {
    Vec2 p = g.position(spatial);
    throw std::invalid_argument(
        "discrete_pucci: node (x=" + std::to_string(p[0]) +
        (g.dim() == 2 ? ", y=" + std::to_string(p[1]) : std::string()) +
        ") too close to the boundary for the stencil");
  }
  return discrete_pucci_slice(u.slice(k), i, j, nx, g.dim(), g.h(), ell, sign,
                              stencil);
}

}  // namespace pmelab
