#pragma once

#include <optional>
#include <vector>

#include "pmelab/grid.hpp"

namespace pmelab {

// P(x,t) = -(a/2)|x - y|^2 + b (t - s), openings a, b > 0.
struct Paraboloid {
  int dim = 1;
  Vec2 vertex_y{0.0, 0.0};
  double vertex_s = 0.0;
  double opening_a = 1.0;
  double opening_b = 1.0;

  double evaluate(const Vec2& x, double t) const;
};

// P'(x,t) = r^{-1} P(r x, r t): opening_a -> r * opening_a, vertex -> vertex/r,
// opening_b unchanged.
Paraboloid lipschitz_rescale(const Paraboloid& p, double r);

// Default contact tolerance: order of the quadratic interpolation error plus
// a machine guard.
inline double contact_tolerance(double h) { return 10.0 * h * h + 1e-12; }

struct ContactEntry {
  int spatial = -1;
  int time_index = -1;
  Vec2 x{0.0, 0.0};
  double t = 0.0;
  Vec2 vertex_y{0.0, 0.0};
  double vertex_s = 0.0;
  double u_value = 0.0;
};

struct ContactSet {
  std::vector<ContactEntry> entries;
  double eps_c = 0.0;
};

// First-crossing contact search. For each vertex (y, s): march the grid times
// upward from s within the region; at the first time where
// min_x (u - P) <= eps_c, record every spatial argmin within eps_c of the
// min. Vertices whose paraboloid never reaches u contribute nothing.
// region = nullopt means the full grid; eps_c <= 0 selects the default
// contact_tolerance(h).
ContactSet contact_set(const GridFunction& u,
                       const std::vector<std::pair<Vec2, double>>& vertices,
                       double opening_a, double opening_b,
                       const std::optional<Cylinder>& region = std::nullopt,
                       double eps_c = 0.0);

struct VertexEstimate {
  Vec2 y{0.0, 0.0};
  double s = 0.0;
};

// Inverts the touching relations at a contact node for a paraboloid with
// equal openings A: y = x + Du/A, s = t - u/A - |Du|^2 / (2 A^2), with
// centered differences for Du. Throws when the node cannot host centered
// differences (spatial boundary).
VertexEstimate vertex_map(const GridFunction& u, int spatial, int k,
                          double opening);

// Vertex box B = y-box x s-interval sampled on a lattice (counts per axis).
struct VertexBox {
  Vec2 y_lo{0.0, 0.0};
  Vec2 y_hi{0.0, 0.0};
  double s_lo = 0.0;
  double s_hi = 0.0;
  std::array<int, 2> ny{8, 1};
  int ns = 8;
};

struct AreaFormulaReport {
  double measure_B = 0.0;
  double integral = 0.0;
  double ratio = 0.0;
  int contact_nodes = 0;
  int vertices_without_contact = 0;
};

// Surjectivity check of the vertex -> contact map for equal-opening A
// paraboloids: integrates (1 - D_t u / A) det(I + D2u / A) over the distinct
// contact nodes of the sampled vertex box and compares with |B|. Time
// derivative is backward, second differences centered. Throws when a contact
// lands where derivatives are unavailable.
AreaFormulaReport area_formula_check(const GridFunction& u,
                                     const VertexBox& box, double opening);

}  // namespace pmelab
