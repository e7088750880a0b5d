#pragma once

#include <array>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "bheat/types.hpp"

namespace bheat {

/// Cell-centered tensor grid on [-X, X]^N x [0, Y]. No node sits at y = 0:
/// y_j = (j + 1/2) h_y, so the weight y^c is finite on every cell for any
/// c > -1. Flattened index: ((i1 * nx0 + i0) * ny + j) with y fastest.
struct Grid {
  int N = 0;
  double X = 0.0, Y = 0.0;
  std::array<int, 2> nx = {1, 1};
  int ny = 0;
  std::array<double, 2> hx = {1.0, 1.0};
  double hy = 0.0;
  double c = 0.0;

  std::vector<double> ycenter;  // ny
  std::vector<double> wcell;    // y_j^c
  std::vector<double> wface;    // y_{j+1/2}^c for j = 0..ny (wface[0] is the y=0 face)

  std::size_t cells() const {
    return static_cast<std::size_t>(nx[0]) * nx[1] * ny;
  }
  /// Lebesgue volume of one cell, Prod hx * hy.
  double cell_volume() const {
    double v = hy;
    for (int d = 0; d < N; ++d) v *= hx[d];
    return v;
  }
  double xcenter(int axis, int i) const { return -X + (i + 0.5) * hx[axis]; }
  /// mu-measure of cell j's slab: y_j^c * cell_volume.
  double mu_cell(int j) const { return wcell[j] * cell_volume(); }

  std::size_t index(int i0, int i1, int j) const {
    return (static_cast<std::size_t>(i1) * nx[0] + i0) * ny + j;
  }
  HalfSpacePoint point(std::size_t idx) const;
  /// Index of the cell containing z (clamped to the grid).
  std::size_t locate(const HalfSpacePoint& z) const;
};

Grid build_grid(const OperatorParams& params, double X, double Y, int nx, int ny);

/// Discrete u(t, .) on a grid, one value per cell.
struct SolutionField {
  std::shared_ptr<const Grid> grid;
  double t = 0.0;
  Eigen::VectorXd u;

  /// Weighted integral  sum_cells u * y^c * cell_volume.
  double weighted_mass() const;
  double max_abs() const;
  /// Multilinear interpolation at z (coordinates clamped to the center box).
  double value_at(const HalfSpacePoint& z) const;
};

SolutionField make_field(std::shared_ptr<const Grid> grid, double t = 0.0);

/// mu-normalized point mass: total mass 1 w.r.t. mu placed in the cell
/// containing `source`, value 1 / (y_j^c * cell_volume).
SolutionField point_mass_field(std::shared_ptr<const Grid> grid,
                               const HalfSpacePoint& source);

}  // namespace bheat
