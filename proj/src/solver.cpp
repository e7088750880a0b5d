#include "bheat/solver.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace bheat {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void add_axial_x(const Grid& g, Triplets& trips) {
  for (int i1 = 0; i1 < g.nx[1]; ++i1)
    for (int i0 = 0; i0 < g.nx[0]; ++i0)
      for (int j = 0; j < g.ny; ++j) {
        const auto row = static_cast<int>(g.index(i0, i1, j));
        for (int d = 0; d < g.N; ++d) {
          const double k = 1.0 / (g.hx[d] * g.hx[d]);
          const int i = d == 0 ? i0 : i1;
          const int n = g.nx[d];
          // Mirror ghosts at the outer boundary drop the missing neighbor.
          if (i > 0) {
            const auto col = d == 0 ? g.index(i0 - 1, i1, j) : g.index(i0, i1 - 1, j);
            trips.emplace_back(row, static_cast<int>(col), k);
            trips.emplace_back(row, row, -k);
          }
          if (i < n - 1) {
            const auto col = d == 0 ? g.index(i0 + 1, i1, j) : g.index(i0, i1 + 1, j);
            trips.emplace_back(row, static_cast<int>(col), k);
            trips.emplace_back(row, row, -k);
          }
        }
      }
}

void add_axial_y(const Grid& g, Triplets& trips) {
  const double inv_h2 = 1.0 / (g.hy * g.hy);
  for (int i1 = 0; i1 < g.nx[1]; ++i1)
    for (int i0 = 0; i0 < g.nx[0]; ++i0)
      for (int j = 0; j < g.ny; ++j) {
        const auto row = static_cast<int>(g.index(i0, i1, j));
        // Flux differencing with face weights; the y=0 and y=Y faces carry
        // zero flux, which encodes the weighted Neumann condition below.
        if (j < g.ny - 1) {
          const double k = g.wface[j + 1] / g.wcell[j] * inv_h2;
          trips.emplace_back(row, static_cast<int>(g.index(i0, i1, j + 1)), k);
          trips.emplace_back(row, row, -k);
        }
        if (j > 0) {
          const double k = g.wface[j] / g.wcell[j] * inv_h2;
          trips.emplace_back(row, static_cast<int>(g.index(i0, i1, j - 1)), k);
          trips.emplace_back(row, row, -k);
        }
      }
}

// Index clamped to the grid: mirror ghost values coincide with the nearest
// interior cell on a cell-centered Neumann grid.
int clampi(int i, int n) { return std::clamp(i, 0, n - 1); }

void add_cross_centered(const Grid& g, const OperatorParams& p, Triplets& trips) {
  for (int d = 0; d < g.N; ++d) {
    const double alpha = 2.0 * p.a[d];
    if (alpha == 0.0) continue;
    const double k = alpha / (4.0 * g.hx[d] * g.hy);
    for (int i1 = 0; i1 < g.nx[1]; ++i1)
      for (int i0 = 0; i0 < g.nx[0]; ++i0)
        for (int j = 0; j < g.ny; ++j) {
          const auto row = static_cast<int>(g.index(i0, i1, j));
          auto at = [&](int di, int dj) {
            const int a0 = d == 0 ? clampi(i0 + di, g.nx[0]) : i0;
            const int a1 = d == 1 ? clampi(i1 + di, g.nx[1]) : i1;
            return static_cast<int>(g.index(a0, a1, clampi(j + dj, g.ny)));
          };
          trips.emplace_back(row, at(+1, +1), k);
          trips.emplace_back(row, at(-1, -1), k);
          trips.emplace_back(row, at(+1, -1), -k);
          trips.emplace_back(row, at(-1, +1), -k);
        }
  }
}

// Tilted 7-point cross stencil: second-order and, combined with the axial
// part, an M-matrix whenever |2 a_d| <= 2 min(hy/hx, w_ratio hx/hy).
void add_cross_tilted(const Grid& g, const OperatorParams& p, Triplets& trips) {
  for (int d = 0; d < g.N; ++d) {
    const double alpha = 2.0 * p.a[d];
    if (alpha == 0.0) continue;
    const double k = std::fabs(alpha) / (2.0 * g.hx[d] * g.hy);
    const int tilt = alpha > 0.0 ? 1 : -1;  // corner pair carrying + coefficients
    for (int i1 = 0; i1 < g.nx[1]; ++i1)
      for (int i0 = 0; i0 < g.nx[0]; ++i0)
        for (int j = 0; j < g.ny; ++j) {
          const auto row = static_cast<int>(g.index(i0, i1, j));
          auto at = [&](int di, int dj) {
            const int a0 = d == 0 ? clampi(i0 + di, g.nx[0]) : i0;
            const int a1 = d == 1 ? clampi(i1 + di, g.nx[1]) : i1;
            return static_cast<int>(g.index(a0, a1, clampi(j + dj, g.ny)));
          };
          trips.emplace_back(row, row, 2.0 * k);
          trips.emplace_back(row, at(+1, +tilt), k);
          trips.emplace_back(row, at(-1, -tilt), k);
          trips.emplace_back(row, at(+1, 0), -k);
          trips.emplace_back(row, at(-1, 0), -k);
          trips.emplace_back(row, at(0, +1), -k);
          trips.emplace_back(row, at(0, -1), -k);
        }
  }
}

Eigen::SparseMatrix<double> from_triplets(std::size_t n, Triplets& trips) {
  Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(n),
                                static_cast<Eigen::Index>(n));
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();
  return m;
}

void check_monotone(const Eigen::SparseMatrix<double>& a) {
  for (int k = 0; k < a.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it)
      if (it.row() != it.col() && it.value() < -1e-13)
        throw std::invalid_argument(
            "monotone scheme: off-diagonal sign violated; refine the mesh ratio "
            "so that |a| fits the tilted stencil");
}

}  // namespace

DiscreteOperator::DiscreteOperator(std::shared_ptr<const Grid> g,
                                   const OperatorParams& p, Scheme s)
    : grid(std::move(g)), params(p), scheme(s) {
  const std::size_t n = grid->cells();
  Triplets ta;
  add_axial_x(*grid, ta);
  add_axial_y(*grid, ta);
  axial_ = from_triplets(n, ta);

  Triplets tc;
  if (scheme == Scheme::monotone_implicit)
    add_cross_tilted(*grid, params, tc);
  else
    add_cross_centered(*grid, params, tc);
  cross_ = from_triplets(n, tc);

  if (scheme == Scheme::monotone_implicit) check_monotone(full());
}

Eigen::SparseMatrix<double> DiscreteOperator::mu_adjoint(
    const Eigen::SparseMatrix<double>& m) const {
  const Grid& g = *grid;
  Triplets trips;
  trips.reserve(static_cast<std::size_t>(m.nonZeros()));
  for (int k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it) {
      const int r = static_cast<int>(it.row());
      const int c = static_cast<int>(it.col());
      const double wr = g.wcell[static_cast<std::size_t>(r) % g.ny];
      const double wc = g.wcell[static_cast<std::size_t>(c) % g.ny];
      trips.emplace_back(c, r, it.value() * wr / wc);
    }
  return from_triplets(g.cells(), trips);
}

SolutionField apply_operator(const SolutionField& u, const OperatorParams& params) {
  if (!u.grid) throw std::invalid_argument("apply_operator: field has no grid");
  DiscreteOperator op(u.grid, params, Scheme::imex_centered);
  SolutionField out = u;
  out.u = op.full() * u.u;
  return out;
}

double cross_cfl_dt(const Grid& grid, const OperatorParams& params) {
  double denom = 0.0;
  for (int d = 0; d < grid.N; ++d) denom += 4.0 * std::fabs(params.a[d]) / (grid.hx[d] * grid.hy);
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / denom;
}

Stepper::Stepper(std::shared_ptr<const Grid> grid, const OperatorParams& params,
                 const SolverConfig& config, bool adjoint)
    : grid_(std::move(grid)), params_(params), config_(config), adjoint_(adjoint) {
  if (!(config_.dt > 0.0)) throw std::invalid_argument("Stepper: dt > 0 required");
  if (!(config_.lin_tol > 0.0 && config_.lin_tol < 1.0))
    throw std::invalid_argument("Stepper: lin_tol in (0,1) required");
  if (config_.scheme == Scheme::monotone_implicit) config_.theta = 1.0;
  if (config_.scheme == Scheme::imex_centered && !params_.is_drift_free()) {
    const double dt_max = config_.cfl_margin * cross_cfl_dt(*grid_, params_);
    if (config_.dt > dt_max)
      throw std::invalid_argument("Stepper: explicit cross term violates CFL, dt <= " +
                                  std::to_string(dt_max) + " required");
  }

  build(config_.theta, expl_main_, impl_main_);
  krylov_main_.setTolerance(config_.lin_tol);
  krylov_main_.setMaxIterations(config_.max_iterations);
  krylov_main_.compute(impl_main_);
  if (config_.rannacher_steps > 0 && config_.theta != 1.0) {
    build(1.0, expl_start_, impl_start_);
    krylov_start_.setTolerance(config_.lin_tol);
    krylov_start_.setMaxIterations(config_.max_iterations);
    krylov_start_.compute(impl_start_);
  }
}

void Stepper::build(double theta, Eigen::SparseMatrix<double>& expl,
                    Eigen::SparseMatrix<double>& impl) const {
  DiscreteOperator op(grid_, params_, config_.scheme);
  const auto n = static_cast<Eigen::Index>(grid_->cells());
  Eigen::SparseMatrix<double> id(n, n);
  id.setIdentity();

  Eigen::SparseMatrix<double> a_impl, b_expl;
  if (config_.scheme == Scheme::imex_centered) {
    a_impl = op.axial();
    b_expl = op.cross();
  } else {
    a_impl = op.full();
    b_expl.resize(n, n);
  }

  expl = id + ((1.0 - theta) * config_.dt) * a_impl + config_.dt * b_expl;
  impl = id - (theta * config_.dt) * a_impl;
  if (adjoint_) {
    expl = op.mu_adjoint(expl);
    impl = op.mu_adjoint(impl);
  }
  expl.makeCompressed();
  impl.makeCompressed();
}

void Stepper::advance(SolutionField& u) const {
  if (u.grid.get() != grid_.get())
    throw std::invalid_argument("Stepper: field lives on a different grid");
  const bool startup = steps_taken_ < config_.rannacher_steps && config_.theta != 1.0 &&
                       config_.rannacher_steps > 0;
  const auto& expl = startup ? expl_start_ : expl_main_;
  auto& krylov = startup ? krylov_start_ : krylov_main_;

  Eigen::VectorXd rhs, next;
  if (!adjoint_) {
    rhs = expl * u.u;
    next = krylov.solveWithGuess(rhs, u.u);
  } else {
    // Adjoint one-step map: solve first, then the explicit stage.
    next = krylov.solveWithGuess(u.u, u.u);
  }
  if (krylov.info() != Eigen::Success && krylov.error() > 50.0 * config_.lin_tol)
    throw std::runtime_error("Stepper: linear solver did not converge, residual " +
                             std::to_string(krylov.error()));
  last_residual_ = krylov.error();
  if (adjoint_) next = expl * next;

  u.u = std::move(next);
  u.t += config_.dt;
  ++steps_taken_;
}

SolutionField step(const SolutionField& u, double dt, const OperatorParams& params,
                   const SolverConfig& config) {
  SolverConfig cfg = config;
  cfg.dt = dt;
  Stepper st(u.grid, params, cfg);
  SolutionField out = u;
  st.advance(out);
  return out;
}

std::vector<SolutionField> solve(const SolutionField& u0, double T,
                                 const OperatorParams& params, const SolverConfig& config,
                                 std::span<const double> snapshot_times, bool adjoint) {
  if (!(T >= 0.0)) throw std::invalid_argument("solve: T >= 0 required");
  if (T == 0.0) return {u0};

  const long n_steps = std::max(1L, std::lround(std::ceil(T / config.dt - 1e-9)));
  SolverConfig cfg = config;
  cfg.dt = T / static_cast<double>(n_steps);

  std::set<long> marks;
  for (double ts : snapshot_times) {
    if (ts <= 0.0 || ts > T + 1e-12) continue;
    marks.insert(std::clamp(std::lround(ts / cfg.dt), 1L, n_steps));
  }
  marks.insert(n_steps);

  Stepper st(u0.grid, params, cfg, adjoint);
  SolutionField u = u0;
  std::vector<SolutionField> out;
  for (long k = 1; k <= n_steps; ++k) {
    st.advance(u);
    if (!u.u.allFinite()) throw std::runtime_error("solve: non-finite values at t = " + std::to_string(u.t));
    if (marks.count(k)) out.push_back(u);
  }
  return out;
}

double weighted_neumann_residual(const SolutionField& u) {
  const Grid& g = *u.grid;
  double worst = 0.0;
  for (int i1 = 0; i1 < g.nx[1]; ++i1)
    for (int i0 = 0; i0 < g.nx[0]; ++i0) {
      const double u0 = u.u[g.index(i0, i1, 0)];
      const double u1 = u.u[g.index(i0, i1, 1)];
      worst = std::max(worst, std::fabs(g.wface[1] * (u1 - u0) / g.hy));
    }
  return worst;
}

double outer_boundary_flux(const SolutionField& u) {
  const Grid& g = *u.grid;
  double worst = 0.0;
  // Top y face.
  for (int i1 = 0; i1 < g.nx[1]; ++i1)
    for (int i0 = 0; i0 < g.nx[0]; ++i0) {
      const double d = u.u[g.index(i0, i1, g.ny - 1)] - u.u[g.index(i0, i1, g.ny - 2)];
      worst = std::max(worst, std::fabs(g.wface[g.ny] * d / g.hy));
    }
  // Outer x faces of every axis.
  for (int d = 0; d < g.N; ++d)
    for (int i1 = 0; i1 < (d == 0 ? g.nx[1] : 1); ++i1)
      for (int io = 0; io < (d == 1 ? g.nx[0] : 1); ++io)
        for (int j = 0; j < g.ny; ++j) {
          auto cell = [&](int i) {
            return d == 0 ? g.index(i, i1, j) : g.index(io, i, j);
          };
          const int n = g.nx[d];
          const double lo = std::fabs(u.u[cell(1)] - u.u[cell(0)]) / g.hx[d];
          const double hi = std::fabs(u.u[cell(n - 1)] - u.u[cell(n - 2)]) / g.hx[d];
          worst = std::max({worst, lo, hi});
        }
  return worst;
}

}  // namespace bheat
