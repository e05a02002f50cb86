#pragma once

#include <string>

#include "pmelab/grid.hpp"

namespace pmelab {

// Traveling front u(x,t) = (e.x + t)_+, exact for gradient coefficient b
// whenever b |e|^2 = 1 (checked within 1e-12).
struct FrontSolution {
  int dim = 1;
  Vec2 e{1.0, 0.0};
  double b = 1.0;

  FrontSolution(int dim_, Vec2 e_, double b_);
  double value(const Vec2& x, double t) const;
};

// Convenience: front along unit direction `dir` for coefficient b, so
// e = dir / sqrt(b).
FrontSolution make_front(int dim, Vec2 dir, double b);

// Pressure of the source-type self-similar solution:
//   p(x,t) = 2 t^{-a} (C - k |x|^2 t^{-2 beta})_+,
//   a = n/(n+2), beta = 1/(n+2), k = 1/(4(n+2)), t > 0.
// Solves dp/dt = p Lap(p) + |Dp|^2 on its support.
struct BarenblattPressure {
  int n = 1;
  double C = 1.0;

  BarenblattPressure(int n_, double C_);
  double alpha() const { return static_cast<double>(n) / (n + 2); }
  double beta() const { return 1.0 / (n + 2); }
  double k() const { return 1.0 / (4.0 * (n + 2)); }
  double value(const Vec2& x, double t) const;
  double support_radius(double t) const;  // sqrt(C/k) t^beta
  double peak(double t) const;            // 2 C t^{-a}
};

struct ComparisonReport {
  bool holds = true;
  // Largest ordering gap max(super - sub) over checked nodes.
  double worst_gap = 0.0;
  // Smallest ordering gap min(super - sub); negative when violated.
  double min_gap = 0.0;
  int spatial = -1;  // first violating node (or argmin of the gap)
  int time_index = -1;
  std::string location;
};

// Checks sub <= super + tol at every node of the shared grid layout.
// Throws if the grids differ in layout (spatial or time).
ComparisonReport comparison_test(const GridFunction& sub,
                                 const GridFunction& super, double tol);

}  // namespace pmelab
