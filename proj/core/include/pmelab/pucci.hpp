#pragma once

#include <array>
#include <vector>

#include "pmelab/grid.hpp"

namespace pmelab {

// Uniform ellipticity interval [lambda, Lambda], 0 < lambda <= Lambda.
struct EllipticityInterval {
  double lambda = 1.0;
  double Lambda = 1.0;

  EllipticityInterval() = default;
  EllipticityInterval(double lam, double Lam);
};

// Symmetric matrix in dimension 1 or 2 (a12 unused in dim 1).
struct SymmetricMatrix {
  int dim = 1;
  double a11 = 0.0;
  double a12 = 0.0;
  double a22 = 0.0;

  // Closed-form eigenvalues; second entry is 0 in dim 1.
  std::array<double, 2> eigenvalues() const;
};

enum class PucciSign { Plus, Minus };

// Extremal value sup_{A in [lambda,Lambda]} trace(A M): sum over eigenvalues
// of Lambda e+ - lambda e-.
double pucci_plus(const SymmetricMatrix& M, const EllipticityInterval& ell);

// Dual: -pucci_plus(-M).
double pucci_minus(const SymmetricMatrix& M, const EllipticityInterval& ell);

// Wide stencil: integer directions grouped into orthogonal sets.
// groups[g] lists indices into directions; the discrete operator combines the
// one-dimensional extremal expressions of each group and takes max (sign +)
// or min (sign -) over groups. Directions are pairwise non-parallel and
// include the coordinate axes.
struct DirectionStencil {
  std::vector<std::array<int, 2>> directions;
  std::vector<std::vector<int>> groups;

  int radius() const;
  void validate(int dim) const;

  static DirectionStencil axis(int dim);
  // Axis pair plus the (1,1),(1,-1) diagonal pair.
  static DirectionStencil standard2d();
};

// Discrete extremal operator at one grid node of one time slice.
// Throws if the node is too close to the spatial boundary for the stencil,
// naming the node.
double discrete_pucci(const GridFunction& u, int spatial, int k,
                      const EllipticityInterval& ell, PucciSign sign,
                      const DirectionStencil& stencil);

// Slice-level core used by the time stepper: no bounds check beyond the
// stencil inset, operates on a raw slice of nx*ny values.
double discrete_pucci_slice(const double* slice, int i, int j, int nx, int dim,
                            double h, const EllipticityInterval& ell,
                            PucciSign sign, const DirectionStencil& stencil);

}  // namespace pmelab
