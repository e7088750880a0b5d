#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Sparse>

#include "bheat/grid.hpp"
#include "bheat/types.hpp"

namespace bheat {

enum class Scheme {
  imex_centered,      // axial part implicit, centered cross stencil explicit (CFL guard)
  fully_implicit,     // centered cross assembled into the implicit system
  monotone_implicit,  // backward Euler with the tilted 7-point cross stencil (M-matrix)
};

struct SolverConfig {
  double dt = 1e-3;
  double theta = 0.5;        // 1 = backward Euler, 1/2 = Crank-Nicolson
  int rannacher_steps = 2;   // leading backward-Euler steps smoothing rough data
  Scheme scheme = Scheme::imex_centered;
  double lin_tol = 1e-12;    // relative residual target of the Krylov solve
  int max_iterations = 4000;
  double cfl_margin = 0.9;
};

/// Discrete L with the weighted Neumann condition built in:
/// x-part central second differences (mirror ghosts on the outer boundary),
/// y-part in conservative flux form y^{-c} D_y(y^c D_y u) with zero flux at
/// the y=0 face and the top face, cross part per scheme.
class DiscreteOperator {
 public:
  DiscreteOperator(std::shared_ptr<const Grid> grid, const OperatorParams& params,
                   Scheme scheme);

  const Eigen::SparseMatrix<double>& axial() const { return axial_; }
  const Eigen::SparseMatrix<double>& cross() const { return cross_; }
  Eigen::SparseMatrix<double> full() const { return axial_ + cross_; }

  /// mu-adjoint W^{-1} M^T W of a stencil matrix on this grid.
  Eigen::SparseMatrix<double> mu_adjoint(const Eigen::SparseMatrix<double>& m) const;

  std::shared_ptr<const Grid> grid;
  OperatorParams params;
  Scheme scheme;

 private:
  Eigen::SparseMatrix<double> axial_, cross_;
};

/// Applies the centered discretization of L to u (one matvec).
SolutionField apply_operator(const SolutionField& u, const OperatorParams& params);

/// Time stepper for D_t u = L u. Theta scheme with optional Rannacher
/// startup; the implicit stage is solved with BiCGSTAB to config.lin_tol.
/// In adjoint mode the one-step map is conjugated by the cell measure, which
/// evolves kernel columns in their second argument.
class Stepper {
 public:
  Stepper(std::shared_ptr<const Grid> grid, const OperatorParams& params,
          const SolverConfig& config, bool adjoint = false);

  void advance(SolutionField& u) const;       // one step of size config.dt
  double last_residual() const { return last_residual_; }

  const SolverConfig& config() const { return config_; }

 private:
  void build(double theta, Eigen::SparseMatrix<double>& expl,
             Eigen::SparseMatrix<double>& impl) const;
  void apply(SolutionField& u, const Eigen::SparseMatrix<double>& expl,
             Eigen::SparseMatrix<double>& impl_solver_key) const;

  std::shared_ptr<const Grid> grid_;
  OperatorParams params_;
  SolverConfig config_;
  bool adjoint_;
  Eigen::SparseMatrix<double> expl_main_, impl_main_;
  Eigen::SparseMatrix<double> expl_start_, impl_start_;  // Rannacher stage
  mutable Eigen::BiCGSTAB<Eigen::SparseMatrix<double>,
                          Eigen::DiagonalPreconditioner<double>>
      krylov_main_, krylov_start_;
  mutable double last_residual_ = 0.0;
  mutable long steps_taken_ = 0;
};

/// One step of size dt (convenience wrapper; assembles matrices each call).
SolutionField step(const SolutionField& u, double dt, const OperatorParams& params,
                   const SolverConfig& config);

/// Advances u0 to horizon T, returning snapshots at the requested times
/// (always including T). Snapshot times are rounded to whole steps.
std::vector<SolutionField> solve(const SolutionField& u0, double T,
                                 const OperatorParams& params, const SolverConfig& config,
                                 std::span<const double> snapshot_times = {},
                                 bool adjoint = false);

/// max over boundary columns of |y^c D_y u| extrapolated to the y = 0 face
/// (one-sided difference over the two lowest cells times the face weight).
double weighted_neumann_residual(const SolutionField& u);

/// max over outer faces (x = +-X and y = Y) of the absolute one-sided flux;
/// used to confirm the domain truncation is inert.
double outer_boundary_flux(const SolutionField& u);

/// Largest stable dt for the explicit centered cross stencil.
double cross_cfl_dt(const Grid& grid, const OperatorParams& params);

}  // namespace bheat
