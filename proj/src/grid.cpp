#include "bheat/grid.hpp"

#include <algorithm>
#include <cmath>

namespace bheat {

Grid build_grid(const OperatorParams& params, double X, double Y, int nx, int ny) {
  if (params.N > 2) throw std::invalid_argument("build_grid: N <= 2 supported");
  if (!(Y > 0.0)) throw std::invalid_argument("build_grid: Y > 0 required");
  if (params.N > 0 && !(X > 0.0)) throw std::invalid_argument("build_grid: X > 0 required");
  if (ny < 4 || (params.N > 0 && nx < 4))
    throw std::invalid_argument("build_grid: resolution >= 4 required");

  Grid g;
  g.N = params.N;
  g.X = params.N > 0 ? X : 0.0;
  g.Y = Y;
  g.ny = ny;
  g.hy = Y / ny;
  g.c = params.c;
  for (int d = 0; d < params.N; ++d) {
    g.nx[d] = nx;
    g.hx[d] = 2.0 * X / nx;
  }

  g.ycenter.resize(ny);
  g.wcell.resize(ny);
  g.wface.resize(ny + 1);
  for (int j = 0; j < ny; ++j) {
    g.ycenter[j] = (j + 0.5) * g.hy;
    g.wcell[j] = std::pow(g.ycenter[j], g.c);
  }
  g.wface[0] = 0.0;  // zero-flux face at y = 0; its weight never multiplies a flux
  for (int j = 1; j <= ny; ++j) g.wface[j] = std::pow(j * g.hy, g.c);
  return g;
}

HalfSpacePoint Grid::point(std::size_t idx) const {
  HalfSpacePoint z;
  const int j = static_cast<int>(idx % ny);
  std::size_t rest = idx / ny;
  const int i0 = static_cast<int>(rest % nx[0]);
  const int i1 = static_cast<int>(rest / nx[0]);
  z.y = ycenter[j];
  z.x.resize(N);
  if (N >= 1) z.x[0] = xcenter(0, i0);
  if (N >= 2) z.x[1] = xcenter(1, i1);
  return z;
}

std::size_t Grid::locate(const HalfSpacePoint& z) const {
  int j = static_cast<int>(std::floor(z.y / hy));
  j = std::clamp(j, 0, ny - 1);
  int i0 = 0, i1 = 0;
  if (N >= 1) i0 = std::clamp(static_cast<int>(std::floor((z.x[0] + X) / hx[0])), 0, nx[0] - 1);
  if (N >= 2) i1 = std::clamp(static_cast<int>(std::floor((z.x[1] + X) / hx[1])), 0, nx[1] - 1);
  return index(i0, i1, j);
}

double SolutionField::weighted_mass() const {
  const Grid& g = *grid;
  const double cv = g.cell_volume();
  double m = 0.0;
  for (std::size_t idx = 0; idx < g.cells(); ++idx)
    m += u[idx] * g.wcell[idx % g.ny] * cv;
  return m;
}

double SolutionField::max_abs() const { return u.size() ? u.cwiseAbs().maxCoeff() : 0.0; }

namespace {

// Clamped cell-center coordinate -> (lower index, weight of upper neighbor).
std::pair<int, double> axis_locate(double coord, double lo_center, double h, int n) {
  double s = (coord - lo_center) / h;
  s = std::clamp(s, 0.0, static_cast<double>(n - 1));
  int i = std::min(static_cast<int>(std::floor(s)), n - 2 >= 0 ? n - 2 : 0);
  if (n == 1) return {0, 0.0};
  return {i, s - i};
}

}  // namespace

double SolutionField::value_at(const HalfSpacePoint& z) const {
  const Grid& g = *grid;
  auto [j, wy] = axis_locate(z.y, g.ycenter[0], g.hy, g.ny);
  auto [i0, w0] = g.N >= 1 ? axis_locate(z.x[0], g.xcenter(0, 0), g.hx[0], g.nx[0])
                           : std::pair<int, double>{0, 0.0};
  auto [i1, w1] = g.N >= 2 ? axis_locate(z.x[1], g.xcenter(1, 0), g.hx[1], g.nx[1])
                           : std::pair<int, double>{0, 0.0};

  double val = 0.0;
  for (int b1 = 0; b1 <= (g.N >= 2 ? 1 : 0); ++b1)
    for (int b0 = 0; b0 <= (g.N >= 1 ? 1 : 0); ++b0)
      for (int bj = 0; bj <= (g.ny > 1 ? 1 : 0); ++bj) {
        const double w = (b0 ? w0 : (g.N >= 1 ? 1.0 - w0 : 1.0)) *
                         (b1 ? w1 : (g.N >= 2 ? 1.0 - w1 : 1.0)) *
                         (bj ? wy : (g.ny > 1 ? 1.0 - wy : 1.0));
        if (w == 0.0) continue;
        val += w * u[g.index(i0 + b0, i1 + b1, j + bj)];
      }
  return val;
}

SolutionField make_field(std::shared_ptr<const Grid> grid, double t) {
  SolutionField f;
  f.t = t;
  f.u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid->cells()));
  f.grid = std::move(grid);
  return f;
}

SolutionField point_mass_field(std::shared_ptr<const Grid> grid,
                               const HalfSpacePoint& source) {
  SolutionField f = make_field(grid);
  const Grid& g = *f.grid;
  const std::size_t idx = g.locate(source);
  f.u[idx] = 1.0 / (g.wcell[idx % g.ny] * g.cell_volume());
  return f;
}

}  // namespace bheat
