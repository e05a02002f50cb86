#include "pmelab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pmelab {

namespace {

std::string node_name(const SpaceTimeGrid& g, int spatial, int k) {
  Vec2 p = g.position(spatial);
  std::string s = "(x=" + std::to_string(p[0]);
  if (g.dim() == 2) s += ", y=" + std::to_string(p[1]);
  s += ", t=" + std::to_string(g.time(k)) + ")";
  return s;
}

}  // namespace

SpaceTimeGrid::SpaceTimeGrid(int dim, Vec2 origin, std::array<int, 2> nodes,
                             double h, double t_start, std::vector<double> dt)
    : dim_(dim),
      origin_(origin),
      nodes_(nodes),
      h_(h),
      t_start_(t_start),
      dt_(std::move(dt)) {
  if (dim_ != 1 && dim_ != 2) throw std::invalid_argument("grid: dim must be 1 or 2");
  if (!(h_ > 0.0) || !std::isfinite(h_)) throw std::invalid_argument("grid: h must be positive");
  if (dim_ == 1) nodes_[1] = 1;
  for (int a = 0; a < dim_; ++a) {
    if (nodes_[a] < 3)
      throw std::invalid_argument("grid: need at least 3 nodes per axis");
  }
  spatial_count_ = nodes_[0] * nodes_[1];
  extent_[0] = h_ * (nodes_[0] - 1);
  extent_[1] = dim_ == 2 ? h_ * (nodes_[1] - 1) : 0.0;

  times_.reserve(dt_.size() + 1);
  times_.push_back(t_start_);
  double t = t_start_;
  for (double d : dt_) {
    if (!(d > 0.0) || !std::isfinite(d))
      throw std::invalid_argument("grid: time steps must be positive");
    t += d;
    times_.push_back(t);
  }
  t_end_ = t;
}

SpaceTimeGrid SpaceTimeGrid::uniform(int dim, Vec2 origin,
                                     std::array<int, 2> nodes, double h,
                                     double t_start, double t_end,
                                     int time_steps) {
  if (time_steps < 0) throw std::invalid_argument("grid: negative step count");
  double span = t_end - t_start;
  if (time_steps == 0) {
    if (std::abs(span) > 1e-12)
      throw std::invalid_argument("grid: zero steps but nonzero time span");
    return SpaceTimeGrid(dim, origin, nodes, h, t_start, {});
  }
  if (!(span > 0.0)) throw std::invalid_argument("grid: t_end must exceed t_start");
  std::vector<double> dt(static_cast<size_t>(time_steps), span / time_steps);
  return SpaceTimeGrid(dim, origin, nodes, h, t_start, std::move(dt));
}

Vec2 SpaceTimeGrid::position(int spatial_index) const {
  int i = spatial_index % nodes_[0];
  int j = spatial_index / nodes_[0];
  return {x(0, i), dim_ == 2 ? x(1, j) : 0.0};
}

int SpaceTimeGrid::nearest_time_index(double t) const {
  int best = 0;
  double gap = std::abs(times_[0] - t);
  for (int k = 1; k < time_count(); ++k) {
    double g = std::abs(times_[k] - t);
    if (g < gap - 1e-15) {
      gap = g;
      best = k;
    }
  }
  return best;
}

bool SpaceTimeGrid::same_layout(const SpaceTimeGrid& other, double tol) const {
  if (dim_ != other.dim_ || nodes_ != other.nodes_) return false;
  if (std::abs(h_ - other.h_) > tol) return false;
  for (int a = 0; a < dim_; ++a)
    if (std::abs(origin_[a] - other.origin_[a]) > tol) return false;
  if (time_count() != other.time_count()) return false;
  for (int k = 0; k < time_count(); ++k)
    if (std::abs(times_[k] - other.times_[k]) > tol) return false;
  return true;
}

GridFunction::GridFunction(GridPtr g, double fill)
    : grid(std::move(g)),
      values(static_cast<size_t>(grid->spatial_count()) * grid->time_count(),
             fill) {}

double GridFunction::max_value() const {
  return *std::max_element(values.begin(), values.end());
}

double GridFunction::min_value() const {
  return *std::min_element(values.begin(), values.end());
}

void GridFunction::check_finite(const std::string& context) const {
  const int ns = grid->spatial_count();
  for (int k = 0; k < grid->time_count(); ++k) {
    const double* s = slice(k);
    for (int i = 0; i < ns; ++i) {
      if (!std::isfinite(s[i]))
        throw std::runtime_error(context + ": non-finite value at node " +
                                 node_name(*grid, i, k));
    }
  }
}

bool Cylinder::contains_space(int dim, const Vec2& x) const {
  double dx = x[0] - center[0];
  double dy = dim == 2 ? x[1] - center[1] : 0.0;
  double r2 = dx * dx + dy * dy;
  double tol = 1e-12 * std::max(1.0, radius);
  return r2 <= (radius + tol) * (radius + tol);
}

bool Cylinder::contains_time(double t) const {
  double tol = 1e-12 * std::max({1.0, std::abs(t_top), depth});
  return t > t_top - depth + tol && t <= t_top + tol;
}

bool Cube::contains(int dim, const Vec2& x) const {
  double tol = 1e-12 * std::max(1.0, side);
  for (int a = 0; a < dim; ++a)
    if (std::abs(x[a] - center[a]) > side / 2 + tol) return false;
  return true;
}

GridFunction sample(const std::function<double(const Vec2&, double)>& f,
                    GridPtr grid, bool flag_non_negative) {
  GridFunction u(grid);
  u.flag_non_negative = flag_non_negative;
  const int ns = grid->spatial_count();
  for (int k = 0; k < grid->time_count(); ++k) {
    double t = grid->time(k);
    double* s = u.slice(k);
    for (int i = 0; i < ns; ++i) {
      double v = f(grid->position(i), t);
      if (!std::isfinite(v))
        throw std::runtime_error("sample: non-finite value at node " +
                                 node_name(*grid, i, k));
      if (flag_non_negative && v < 0.0)
        throw std::runtime_error("sample: negative value at node " +
                                 node_name(*grid, i, k));
      s[i] = v;
    }
  }
  return u;
}

namespace {

// Visit every node inside the cylinder; f(spatial, k). Returns visit count.
template <typename F>
long visit_region(const GridFunction& u, const Cylinder& region, F&& f) {
  const SpaceTimeGrid& g = *u.grid;
  long count = 0;
  for (int k = 0; k < g.time_count(); ++k) {
    if (!region.contains_time(g.time(k))) continue;
    for (int i = 0; i < g.spatial_count(); ++i) {
      if (!region.contains_space(g.dim(), g.position(i))) continue;
      f(i, k);
      ++count;
    }
  }
  return count;
}

}  // namespace

double oscillation(const GridFunction& u, const Cylinder& cyl) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  long n = visit_region(u, cyl, [&](int i, int k) {
    double v = u.at(i, k);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  });
  if (n == 0) throw std::invalid_argument("oscillation: cylinder contains no grid node");
  return hi - lo;
}

double region_measure(const GridFunction& u, const Cylinder& region) {
  const SpaceTimeGrid& g = *u.grid;
  double m = 0.0;
  visit_region(u, region, [&](int, int k) { m += g.slice_weight(k); });
  return m * g.cell_volume();
}

double sublevel_measure(const GridFunction& u, double level,
                        const Cylinder& region) {
  const SpaceTimeGrid& g = *u.grid;
  double m = 0.0;
  long n = visit_region(u, region, [&](int i, int k) {
    if (u.at(i, k) <= level) m += g.slice_weight(k);
  });
  if (n == 0) throw std::invalid_argument("sublevel_measure: empty region");
  return m * g.cell_volume();
}

double superlevel_measure(const GridFunction& u, double level,
                          const Cylinder& region) {
  const SpaceTimeGrid& g = *u.grid;
  double m = 0.0;
  long n = visit_region(u, region, [&](int i, int k) {
    if (u.at(i, k) > level) m += g.slice_weight(k);
  });
  if (n == 0) throw std::invalid_argument("superlevel_measure: empty region");
  return m * g.cell_volume();
}

double spatial_sublevel_measure(const GridFunction& u, int k, double level,
                                const Cube& box) {
  const SpaceTimeGrid& g = *u.grid;
  if (k < 0 || k >= g.time_count())
    throw std::invalid_argument("spatial_sublevel_measure: bad time index");
  long count = 0;
  for (int i = 0; i < g.spatial_count(); ++i) {
    if (!box.contains(g.dim(), g.position(i))) continue;
    if (u.at(i, k) <= level) ++count;
  }
  return static_cast<double>(count) * g.cell_volume();
}

GridFunction scaling_transform(const GridFunction& u, double r, double alpha) {
  if (!(r > 0.0) || !std::isfinite(r))
    throw std::invalid_argument("scaling_transform: r must be positive");
  const SpaceTimeGrid& g = *u.grid;
  // v lives on the transported grid: x' = x / r, t' = t / r^{2-alpha};
  // node indices are unchanged, so no interpolation is involved.
  double ts = std::pow(r, alpha - 2.0);  // multiplies times
  Vec2 origin{g.origin()[0] / r, g.origin()[1] / r};
  std::vector<double> dt(g.dt_list());
  for (double& d : dt) d *= ts;
  auto grid = std::make_shared<SpaceTimeGrid>(
      g.dim(), origin, std::array<int, 2>{g.nodes(0), g.nodes(1)}, g.h() / r,
      g.t_start() * ts, std::move(dt));
  GridFunction v(grid);
  v.flag_non_negative = u.flag_non_negative;
  double vs = std::pow(r, -alpha);
  for (size_t idx = 0; idx < u.values.size(); ++idx) v.values[idx] = vs * u.values[idx];
  v.check_finite("scaling_transform");
  return v;
}

Cylinder full_region(const SpaceTimeGrid& grid) {
  Cylinder c;
  c.center = {grid.origin()[0] + grid.extent()[0] / 2,
              grid.dim() == 2 ? grid.origin()[1] + grid.extent()[1] / 2 : 0.0};
  c.radius = grid.extent()[0] + grid.extent()[1] + 1.0;
  double span = grid.t_end() - grid.t_start();
  c.t_top = grid.t_end();
  // Generous depth so even the first slice is included in time.
  c.depth = span + std::max(1.0, std::abs(span));
  return c;
}

}  // namespace pmelab
