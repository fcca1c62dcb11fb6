#pragma once

#include "svlasov/grid.hpp"

namespace svlasov {

/// Bracketing cell and blend weight for a foot point expressed in index
/// units: the value is (1 - weight) * node[base] + weight * node[base + 1].
/// Positions within kNodeSnap of an integer resolve to that node with weight 0,
/// so integer shifts are exact permutations.
struct CellWeight {
  long base = 0;
  double weight = 0.0;
};

inline constexpr double kNodeSnap = 1e-9;

CellWeight locate(double position);

/// Periodic linear interpolation along x at fixed v node j.
double sample_x(const Field& f, double x, int j);

/// Linear interpolation along v at fixed x node i; zero outside [-vmax, vmax].
double sample_v(const Field& f, int i, double v);

/// Tensor-product linear interpolation, periodic in x and zero-extended in v.
double sample_xv(const Field& f, double x, double v);

}  // namespace svlasov
