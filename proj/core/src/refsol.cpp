#include "pmelab/refsol.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pmelab {

FrontSolution::FrontSolution(int dim_, Vec2 e_, double b_)
    : dim(dim_), e(e_), b(b_) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("front: dim must be 1 or 2");
  if (!(b > 0.0)) throw std::invalid_argument("front: b must be positive");
  double n2 = e[0] * e[0] + (dim == 2 ? e[1] * e[1] : 0.0);
  if (std::abs(b * n2 - 1.0) > 1e-12)
    throw std::invalid_argument("front: requires b |e|^2 = 1");
}

double FrontSolution::value(const Vec2& x, double t) const {
  double s = e[0] * x[0] + (dim == 2 ? e[1] * x[1] : 0.0) + t;
  return s > 0.0 ? s : 0.0;
}

FrontSolution make_front(int dim, Vec2 dir, double b) {
  double n2 = dir[0] * dir[0] + (dim == 2 ? dir[1] * dir[1] : 0.0);
  if (!(n2 > 0.0)) throw std::invalid_argument("make_front: zero direction");
  double scale = 1.0 / std::sqrt(b * n2);
  return FrontSolution(dim, {dir[0] * scale, dim == 2 ? dir[1] * scale : 0.0},
                       b);
}

BarenblattPressure::BarenblattPressure(int n_, double C_) : n(n_), C(C_) {
  if (n != 1 && n != 2) throw std::invalid_argument("barenblatt: n must be 1 or 2");
  if (!(C > 0.0)) throw std::invalid_argument("barenblatt: C must be positive");
}

double BarenblattPressure::value(const Vec2& x, double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("barenblatt: t must be positive");
  double r2 = x[0] * x[0] + (n == 2 ? x[1] * x[1] : 0.0);
  double s = C - k() * r2 * std::pow(t, -2.0 * beta());
  return s > 0.0 ? 2.0 * std::pow(t, -alpha()) * s : 0.0;
}

double BarenblattPressure::support_radius(double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("barenblatt: t must be positive");
  return std::sqrt(C / k()) * std::pow(t, beta());
}

double BarenblattPressure::peak(double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("barenblatt: t must be positive");
  return 2.0 * C * std::pow(t, -alpha());
}

ComparisonReport comparison_test(const GridFunction& sub,
                                 const GridFunction& super, double tol) {
  const SpaceTimeGrid& g = *sub.grid;
  if (!g.same_layout(*super.grid))
    throw std::invalid_argument("comparison_test: grid layouts differ");
  ComparisonReport rep;
  rep.worst_gap = -std::numeric_limits<double>::infinity();
  rep.min_gap = std::numeric_limits<double>::infinity();
  for (int k = 0; k < g.time_count(); ++k) {
    for (int i = 0; i < g.spatial_count(); ++i) {
      double gap = super.at(i, k) - sub.at(i, k);
      rep.worst_gap = std::max(rep.worst_gap, gap);
      if (gap < rep.min_gap) {
        rep.min_gap = gap;
        if (rep.holds || gap < -tol) {
          rep.spatial = i;
          rep.time_index = k;
        }
      }
      if (gap < -tol && rep.holds) {
        rep.holds = false;
        rep.spatial = i;
        rep.time_index = k;
      }
    }
  }
  if (rep.spatial >= 0) {
    Vec2 p = g.position(rep.spatial);
    rep.location = "(x=" + std::to_string(p[0]) +
                   (g.dim() == 2 ? ", y=" + std::to_string(p[1]) : std::string()) +
                   ", t=" + std::to_string(g.time(rep.time_index)) + ")";
  }
  return rep;
}

}  // namespace pmelab
