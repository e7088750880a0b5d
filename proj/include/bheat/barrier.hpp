#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "bheat/grid.hpp"
#include "bheat/solver.hpp"
#include "bheat/types.hpp"

namespace bheat {

/// Parameters of the barrier v(t,z) = (delta-t)^{-alpha} exp(kappa |z|^2 / (delta-t)).
struct BarrierParams {
  double alpha = 1.0;
  double kappa = 0.125;
  double delta = 1.0;
  double beta = 1.0;  // growth rate of the datum class the barrier dominates
};

double barrier_value(double t, const HalfSpacePoint& z, const BarrierParams& bp);

/// v_t - L v at (t, z), computed from the closed-form derivative table:
///   [ alpha/(d-t) + (kappa - 4 kappa^2) |z|^2/(d-t)^2
///     - 8 kappa^2 (a.x) y/(d-t)^2 - 2 kappa (N+1+c)/(d-t) ] v.
/// A high-order finite-difference evaluation of the same quantity is run
/// alongside and must agree to `check_tol` relative, else this throws.
/// The cross-check requires y >= 1e-3: below that the (c/y) D_y term is not
/// representable by difference quotients in double precision.
double barrier_residual(double t, const HalfSpacePoint& z, const BarrierParams& bp,
                        const OperatorParams& params, double check_tol = 1e-6);

/// Finite-difference path of the residual alone (the independent route).
double barrier_residual_fd(double t, const HalfSpacePoint& z, const BarrierParams& bp,
                           const OperatorParams& params);

/// Admissible kappa interval (0, 1/(4 + 4|a|)]: the quadratic form
/// (kappa - 4 kappa^2)|z|^2 - 8 kappa^2 (a.x) y stays nonnegative via
/// |2 (a.x) y| <= |a| |z|^2.
std::pair<double, double> admissible_kappa(const OperatorParams& params);

/// Smallest alpha making the residual sign depend only on kappa:
/// alpha = 2 kappa (N+1+c+) + margin.
double barrier_alpha(const OperatorParams& params, double kappa, double margin = 1.0);

struct MaxPrincipleScenario {
  std::shared_ptr<const Grid> grid;
  std::function<double(const HalfSpacePoint&)> u0;  // must be <= 0
  double T = 0.5;
  double tolerance = 1e-12;
};

/// Runs the monotone solver configuration on nonpositive data and checks
/// the solution stays below `tolerance` at every step.
bool max_principle_scenario(const OperatorParams& params,
                            const MaxPrincipleScenario& scenario,
                            const SolverConfig& config);

enum class RepresentationMethod {
  explicit_kernel,    // superpose the a = 0 closed form over the datum cells
  numerical_columns,  // superpose per-cell numerical kernel columns (any a)
};

struct RepresentationOptions {
  RepresentationMethod method = RepresentationMethod::explicit_kernel;
  double support_floor = 0.0;        // datum cells with |u0| <= floor are skipped
  double compare_floor_frac = 1e-3;  // compare where solution >= frac * max
};

/// Max relative deviation between solve(u0, T) and the kernel superposition
/// integral(p(T, ., z2) u0(z2) dmu(z2)) on the comparison region.
double representation_check(const SolutionField& u0, double T,
                            const OperatorParams& params, const SolverConfig& config,
                            const RepresentationOptions& options = {});

/// Trajectory = snapshots of one solve, ordered in time.
using Trajectory = std::vector<SolutionField>;

/// sup over cylinders of  sup_{I(r/2)} |u| / (mean_{I(r)} |u|^p)^{1/p}
/// with u extended by 0 for negative times. Cylinders whose full mean is 0
/// are skipped and reported through `skipped`.
double mean_value_constant(const Trajectory& traj,
                           std::span<const ParabolicCylinder> cylinders, double p,
                           long* skipped = nullptr);

struct GrowthReport {
  double p = 2.0;
  double beta = 1.0;
  double pointwise_C = 0.0;  // smallest C with |u| <= C exp(beta |z|^2) on the grid
  double weighted_integral = 0.0;  // time-space integral of e^{-beta|z|^2} |u|^p dmu dt
  std::vector<std::pair<double, double>> ball_integrals;  // r -> integral over Q(0,r)
};

GrowthReport growth_functionals(const Trajectory& traj, double beta, double p,
                                std::span<const double> radii);

}  // namespace bheat
