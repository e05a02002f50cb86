#include "pmelab/paraboloid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

namespace pmelab {

double Paraboloid::evaluate(const Vec2& x, double t) const {
  double dx = x[0] - vertex_y[0];
  double dy = dim == 2 ? x[1] - vertex_y[1] : 0.0;
  return -0.5 * opening_a * (dx * dx + dy * dy) + opening_b * (t - vertex_s);
}

Paraboloid lipschitz_rescale(const Paraboloid& p, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("lipschitz_rescale: r must be positive");
  Paraboloid q = p;
  q.opening_a = r * p.opening_a;
  q.vertex_y = {p.vertex_y[0] / r, p.dim == 2 ? p.vertex_y[1] / r : 0.0};
  q.vertex_s = p.vertex_s / r;
  return q;
}

namespace {

// Smallest grid index i with x(i) >= v - pad (clamped).
int lo_index(double origin, double h, int n, double v, double pad) {
  int i = static_cast<int>(std::floor((v - pad - origin) / h));
  return std::clamp(i, 0, n - 1);
}
int hi_index(double origin, double h, int n, double v, double pad) {
  int i = static_cast<int>(std::ceil((v + pad - origin) / h));
  return std::clamp(i, 0, n - 1);
}

}  // namespace

ContactSet contact_set(const GridFunction& u,
                       const std::vector<std::pair<Vec2, double>>& vertices,
                       double opening_a, double opening_b,
                       const std::optional<Cylinder>& region, double eps_c) {
  const SpaceTimeGrid& g = *u.grid;
  if (!(opening_a > 0.0) || !(opening_b > 0.0))
    throw std::invalid_argument("contact_set: openings must be positive");
  const double eps = eps_c > 0.0 ? eps_c : contact_tolerance(g.h());
  const int nx = g.nodes(0);
  const int ny = g.dim() == 2 ? g.nodes(1) : 1;

  // Global floor of u on the region limits how negative u - P can get where
  // P <= 0; it makes the spatial search window exact.
  double u_floor = 0.0;
  for (double v : u.values) u_floor = std::min(u_floor, v);

  ContactSet cs;
  cs.eps_c = eps;
  for (const auto& vs : vertices) {
    const Vec2& y = vs.first;
    const double s = vs.second;
    Paraboloid P{g.dim(), y, s, opening_a, opening_b};
    for (int k = 0; k < g.time_count(); ++k) {
      const double t = g.time(k);
      if (t <= s + 1e-12 * std::max(1.0, std::abs(s))) continue;
      if (region && !region->contains_time(t)) continue;
      // u - P <= 2 eps requires P >= u_floor - 2 eps, i.e. the node lies in
      // a ball of this radius about the vertex.
      double rad2 =
          (2.0 / opening_a) * (opening_b * (t - s) + 2.0 * eps - u_floor);
      if (rad2 < 0.0) continue;
      double rad = std::sqrt(rad2);
      int i0 = lo_index(g.origin()[0], g.h(), nx, y[0], rad);
      int i1 = hi_index(g.origin()[0], g.h(), nx, y[0], rad);
      int j0 = 0, j1 = 0;
      if (g.dim() == 2) {
        j0 = lo_index(g.origin()[1], g.h(), ny, y[1], rad);
        j1 = hi_index(g.origin()[1], g.h(), ny, y[1], rad);
      }
      const double* slice = u.slice(k);
      double best = std::numeric_limits<double>::infinity();
      for (int j = j0; j <= j1; ++j) {
        for (int i = i0; i <= i1; ++i) {
          int c = j * nx + i;
          Vec2 p = g.position(c);
          if (region && !region->contains_space(g.dim(), p)) continue;
          double gap = slice[c] - P.evaluate(p, t);
          best = std::min(best, gap);
        }
      }
      if (!(best <= eps)) continue;
      for (int j = j0; j <= j1; ++j) {
        for (int i = i0; i <= i1; ++i) {
          int c = j * nx + i;
          Vec2 p = g.position(c);
          if (region && !region->contains_space(g.dim(), p)) continue;
          double gap = slice[c] - P.evaluate(p, t);
          if (gap <= best + eps) {
            ContactEntry e;
            e.spatial = c;
            e.time_index = k;
            e.x = p;
            e.t = t;
            e.vertex_y = y;
            e.vertex_s = s;
            e.u_value = slice[c];
            cs.entries.push_back(e);
          }
        }
      }
      break;  // first crossing only
    }
  }
  return cs;
}

VertexEstimate vertex_map(const GridFunction& u, int spatial, int k,
                          double opening) {
  const SpaceTimeGrid& g = *u.grid;
  if (!(opening > 0.0)) throw std::invalid_argument("vertex_map: opening must be positive");
  const int nx = g.nodes(0);
  const int i = spatial % nx;
  const int j = spatial / nx;
  bool ok = i >= 1 && i + 1 < nx;
  if (g.dim() == 2) ok = ok && j >= 1 && j + 1 < g.nodes(1);
  if (!ok) {
    Vec2 p = g.position(spatial);
    throw std::invalid_argument("vertex_map: contact on the grid boundary at x=" +
                                std::to_string(p[0]));
  }
  const double* slice = u.slice(k);
  const double h = g.h();
  Vec2 du{(slice[spatial + 1] - slice[spatial - 1]) / (2.0 * h), 0.0};
  if (g.dim() == 2)
    du[1] = (slice[spatial + nx] - slice[spatial - nx]) / (2.0 * h);
  double du2 = du[0] * du[0] + du[1] * du[1];
  Vec2 p = g.position(spatial);
  VertexEstimate est;
  est.y = {p[0] + du[0] / opening, g.dim() == 2 ? p[1] + du[1] / opening : 0.0};
  est.s = g.time(k) - slice[spatial] / opening -
          du2 / (2.0 * opening * opening);
  return est;
}

AreaFormulaReport area_formula_check(const GridFunction& u,
                                     const VertexBox& box, double opening) {
  const SpaceTimeGrid& g = *u.grid;
  std::vector<std::pair<Vec2, double>> vertices;
  const int nyy = g.dim() == 2 ? box.ny[1] : 1;
  for (int a = 0; a < box.ny[0]; ++a) {
    for (int b = 0; b < nyy; ++b) {
      for (int c = 0; c < box.ns; ++c) {
        Vec2 y;
        y[0] = box.y_lo[0] +
               (box.y_hi[0] - box.y_lo[0]) * (a + 0.5) / box.ny[0];
        y[1] = g.dim() == 2 ? box.y_lo[1] + (box.y_hi[1] - box.y_lo[1]) *
                                                (b + 0.5) / box.ny[1]
                            : 0.0;
        double s = box.s_lo + (box.s_hi - box.s_lo) * (c + 0.5) / box.ns;
        vertices.emplace_back(y, s);
      }
    }
  }

  ContactSet cs = contact_set(u, vertices, opening, opening);
  AreaFormulaReport rep;
  rep.measure_B = (box.y_hi[0] - box.y_lo[0]) *
                  (g.dim() == 2 ? box.y_hi[1] - box.y_lo[1] : 1.0) *
                  (box.s_hi - box.s_lo);
  {
    std::set<std::array<double, 3>> seen;
    for (const auto& e : cs.entries)
      seen.insert({e.vertex_y[0], e.vertex_y[1], e.vertex_s});
    rep.vertices_without_contact =
        static_cast<int>(vertices.size()) - static_cast<int>(seen.size());
  }

  std::set<std::pair<int, int>> nodes;
  for (const auto& e : cs.entries) nodes.insert({e.spatial, e.time_index});
  rep.contact_nodes = static_cast<int>(nodes.size());

  const int nx = g.nodes(0);
  const double h = g.h();
  double integral = 0.0;
  for (const auto& nk : nodes) {
    const int c = nk.first;
    const int k = nk.second;
    const int i = c % nx;
    const int j = c / nx;
    bool ok = k >= 1 && i >= 1 && i + 1 < nx;
    if (g.dim() == 2) ok = ok && j >= 1 && j + 1 < g.nodes(1);
    if (!ok)
      throw std::runtime_error(
          "area_formula_check: contact node lacks interior derivatives");
    const double* cur = u.slice(k);
    const double* prev = u.slice(k - 1);
    double dt = g.dt_list()[k - 1];
    double ut = (cur[c] - prev[c]) / dt;
    double uxx = (cur[c + 1] - 2.0 * cur[c] + cur[c - 1]) / (h * h);
    double det;
    if (g.dim() == 1) {
      det = 1.0 + uxx / opening;
    } else {
      double uyy = (cur[c + nx] - 2.0 * cur[c] + cur[c - nx]) / (h * h);
      double uxy = (cur[c + nx + 1] - cur[c + nx - 1] - cur[c - nx + 1] +
                    cur[c - nx - 1]) /
                   (4.0 * h * h);
      double m11 = 1.0 + uxx / opening;
      double m22 = 1.0 + uyy / opening;
      double m12 = uxy / opening;
      det = m11 * m22 - m12 * m12;
    }
    integral += (1.0 - ut / opening) * det * g.cell_volume() * dt;
  }
  rep.integral = integral;
  rep.ratio = rep.measure_B > 0.0 ? integral / rep.measure_B : 0.0;
  return rep;
}

}  // namespace pmelab
