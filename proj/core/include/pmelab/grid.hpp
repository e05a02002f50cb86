#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace pmelab {

using Vec2 = std::array<double, 2>;

// Uniform tensor-product space-time grid in dimension 1 or 2.
// Time steps are an explicit, possibly non-uniform list; slice k sits at
// time(k) and carries the interval (time(k-1), time(k)] when measuring.
// Invariants: 1 <= dim <= 2, h > 0, >= 3 nodes per axis,
// sum(dt) == t_end - t_start within 1e-12.
class SpaceTimeGrid {
 public:
  SpaceTimeGrid(int dim, Vec2 origin, std::array<int, 2> nodes, double h,
                double t_start, std::vector<double> dt);

  // Convenience: uniform time steps covering [t_start, t_end].
  static SpaceTimeGrid uniform(int dim, Vec2 origin, std::array<int, 2> nodes,
                               double h, double t_start, double t_end,
                               int time_steps);

  int dim() const { return dim_; }
  double h() const { return h_; }
  Vec2 origin() const { return origin_; }
  Vec2 extent() const { return extent_; }
  int nodes(int axis) const { return nodes_[axis]; }
  int spatial_count() const { return spatial_count_; }
  double t_start() const { return t_start_; }
  double t_end() const { return t_end_; }
  int time_count() const { return static_cast<int>(times_.size()); }
  double time(int k) const { return times_[k]; }
  const std::vector<double>& dt_list() const { return dt_; }
  // Weight of slice k for space-time measures; slice 0 carries none
  // (bottom of the covered interval is open).
  double slice_weight(int k) const { return k == 0 ? 0.0 : dt_[k - 1]; }
  double cell_volume() const { return dim_ == 1 ? h_ : h_ * h_; }

  double x(int axis, int i) const { return origin_[axis] + h_ * i; }
  Vec2 position(int spatial_index) const;
  int flat_index(int i, int j) const { return j * nodes_[0] + i; }

  // Index of the grid time nearest to t (ties to the earlier slice).
  int nearest_time_index(double t) const;

  bool same_layout(const SpaceTimeGrid& other, double tol = 1e-12) const;

 private:
  int dim_;
  Vec2 origin_;
  Vec2 extent_;
  std::array<int, 2> nodes_;
  int spatial_count_;
  double h_;
  double t_start_, t_end_;
  std::vector<double> dt_;
  std::vector<double> times_;
};

using GridPtr = std::shared_ptr<const SpaceTimeGrid>;

// Scalar field on every node of a SpaceTimeGrid. Values are stored
// slice-contiguously: index k * spatial_count + s. All values finite;
// if flag_non_negative is set, all values >= 0 (checked on demand).
struct GridFunction {
  GridPtr grid;
  std::vector<double> values;
  bool flag_non_negative = false;

  GridFunction() = default;
  explicit GridFunction(GridPtr g, double fill = 0.0);

  double at(int spatial, int k) const {
    return values[static_cast<size_t>(k) * grid->spatial_count() + spatial];
  }
  double& at(int spatial, int k) {
    return values[static_cast<size_t>(k) * grid->spatial_count() + spatial];
  }
  const double* slice(int k) const {
    return values.data() + static_cast<size_t>(k) * grid->spatial_count();
  }
  double* slice(int k) {
    return values.data() + static_cast<size_t>(k) * grid->spatial_count();
  }

  double max_value() const;
  double min_value() const;
  void check_finite(const std::string& context) const;
};

// Parabolic cylinder B_r(center) x (t_top - depth, t_top]: spatially closed,
// top time slice included, bottom excluded.
struct Cylinder {
  Vec2 center{0.0, 0.0};
  double t_top = 0.0;
  double radius = 0.0;
  double depth = 0.0;

  bool contains_space(int dim, const Vec2& x) const;
  bool contains_time(double t) const;
};

// Spatial cube of side l about center (closed).
struct Cube {
  Vec2 center{0.0, 0.0};
  double side = 0.0;

  bool contains(int dim, const Vec2& x) const;
};

// Evaluate f(x, t) at every node. Throws if f produces a non-finite value,
// naming the offending node.
GridFunction sample(const std::function<double(const Vec2&, double)>& f,
                    GridPtr grid, bool flag_non_negative = false);

// max - min of u over grid nodes inside the cylinder. Throws if the cylinder
// contains no grid node.
double oscillation(const GridFunction& u, const Cylinder& cyl);

// Node-counting measure of the region itself: sum of h^dim * slice_weight
// over contained nodes.
double region_measure(const GridFunction& u, const Cylinder& region);

// Node-counting measure of {u <= level} within region.
double sublevel_measure(const GridFunction& u, double level,
                        const Cylinder& region);

// Node-counting measure of {u > level} within region (strict).
double superlevel_measure(const GridFunction& u, double level,
                          const Cylinder& region);

// Spatial-only node-counting measure of {u(.,k) <= level} within a cube at
// time slice k: count * h^dim.
double spatial_sublevel_measure(const GridFunction& u, int k, double level,
                                const Cube& box);

// v(x,t) = r^{-alpha} u(r x, r^{2-alpha} t) realized by transporting the grid
// itself: nodes map one-to-one, no interpolation. r must be positive.
GridFunction scaling_transform(const GridFunction& u, double r, double alpha);

// A cylinder that contains every node of the grid (used as "full grid"
// region).
Cylinder full_region(const SpaceTimeGrid& grid);

}  // namespace pmelab
