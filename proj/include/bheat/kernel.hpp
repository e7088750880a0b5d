#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bheat/grid.hpp"
#include "bheat/solver.hpp"
#include "bheat/types.hpp"

namespace bheat {

/// One kernel evaluation p = p(t, z1, z2), a density w.r.t. mu in z2.
struct KernelSample {
  double t = 0.0;
  HalfSpacePoint z1, z2;
  double p = 0.0;
};

enum class EnvelopeForm {
  weight,              // t^{-(N+1)/2} weight factors in y1 and y2
  volume,              // 1 / sqrt(V(z1, sqrt t) V(z2, sqrt t))
  weight_onesided_z1,  // both weight factors taken at y1
  weight_onesided_z2,
};

/// Fitted two-sided envelope constants for
///   C_low shape(k_low) <= p <= C_up shape(k_up).
struct KernelEstimate {
  EnvelopeForm form = EnvelopeForm::weight;
  double C_up = 0.0, k_up = 0.0;
  double C_low = 0.0, k_low = 0.0;
  long n_samples = 0;
  long violation_count = 0;       // on the fitting set (0 by construction)
  long held_out_violations = 0;
};

/// y-factor of the a=0 kernel: the Bessel semigroup transition density
///   b_c(t, y1, y2) = (2t)^{-1} (y1 y2)^{-(c-1)/2} I_{(c-1)/2}(y1 y2 / 2t)
///                    exp(-(y1^2+y2^2)/4t),
/// a density w.r.t. y2^c dy2. Evaluated through the scaled Bessel function,
/// so the exponent collapses to -(y1-y2)^2/4t and never overflows.
double bessel_transition_density(double t, double y1, double y2, double c);

/// Full a=0 kernel (4 pi t)^{-N/2} exp(-|x1-x2|^2/4t) b_c(t, y1, y2),
/// density w.r.t. mu(dz2) = y2^c dx2 dy2. Requires a = 0, t > 0, y1, y2 > 0.
double explicit_kernel_a0(double t, const HalfSpacePoint& z1, const HalfSpacePoint& z2,
                          const OperatorParams& params);

/// Which argument of p(t, ., .) a numerical column resolves.
enum class ColumnSide {
  first,   // z -> p(t, z, source): forward solve from the mu point mass
  second,  // z -> p(t, source, z): mu-adjoint solve; matches diffusion endpoints
};

/// Kernel column by PDE solve from the mu-normalized single-cell point mass.
SolutionField numerical_kernel_column(double t, const HalfSpacePoint& source,
                                      const OperatorParams& params,
                                      std::shared_ptr<const Grid> grid,
                                      const SolverConfig& config,
                                      ColumnSide side = ColumnSide::first);

/// Envelope shape with constants (C, k); see EnvelopeForm.
double envelope_value(double t, const HalfSpacePoint& z1, const HalfSpacePoint& z2,
                      const OperatorParams& params, double C, double k,
                      EnvelopeForm form);

/// Empirical (C1, C2) with
///   C1 e^{-eps |y1-y2|^2} <= ratio of weight factors <= C2 e^{eps |y1-y2|^2}
/// over the sampled pairs, for the time-free factors y^{-c/2} (1 ^ y)^{c/2}.
std::pair<double, double> equivalence_factor_check(
    double c, double eps, std::span<const std::pair<double, double>> samples);

struct FitOptions {
  double k_min = 1.0, k_max = 100.0;
  int k_points = 60;            // logarithmic grid
  double floor_fraction = 1e-8; // exclude p < floor_fraction * max p from the lower fit
  double tie_tolerance = 1e-3;  // relative plateau tolerance of the k selection
  double violation_slack = 1e-9;
};

/// Fits (C_up, k_up, C_low, k_low): for each k on the grid, C_up(k) is the
/// max of p/shape and C_low(k) the min over above-floor samples; k_up is the
/// smallest k on the C_up plateau, k_low the largest on the C_low plateau.
/// Violations are re-counted on `held_out`.
KernelEstimate fit_bound_constants(std::span<const KernelSample> fit,
                                   std::span<const KernelSample> held_out,
                                   const OperatorParams& params, EnvelopeForm form,
                                   const FitOptions& options = {});

/// Violation count of C_low shape(k_low) <= p <= C_up shape(k_up) on samples.
long count_envelope_violations(const KernelEstimate& est,
                               std::span<const KernelSample> samples,
                               const OperatorParams& params, double slack = 1e-9);

}  // namespace bheat
