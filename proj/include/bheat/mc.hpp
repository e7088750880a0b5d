#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "bheat/grid.hpp"
#include "bheat/rng.hpp"
#include "bheat/types.hpp"

namespace bheat {

enum class ReflectionScheme {
  reflect_at_zero,  // Euler-Maruyama, |Y| after each step, drift clamped
  exact_bessel,     // exact Bessel bridge for the y-coordinate (a = 0 only)
};

struct PathConfig {
  double dt = 0.0;  // 0 = default 1e-4 * t capped at 1e-3
  long n_paths = 1;
  ReflectionScheme reflection = ReflectionScheme::reflect_at_zero;
  std::uint64_t seed = 1;

  double effective_dt(double t) const {
    if (dt > 0.0) return dt;
    return std::min(1e-4 * t, 1e-3);
  }
};

/// Euler-Maruyama endpoint of the diffusion with generator L started at z0:
///   dY = (c/Y) ds + sqrt(2) dW_y,  dX = sqrt(2) (a dW_y + B dW_x),
/// with B B^T = I - a a^T, Y reflected at 0 and the drift clamped so one
/// step never overshoots, |c/Y| ds <= Y/2.
HalfSpacePoint sample_endpoint(const HalfSpacePoint& z0, double t,
                               const OperatorParams& params, const PathConfig& config,
                               Rng& rng);

/// Exact sample of Y_t for the a = 0 radial part: Y_t^2 is 2t times a
/// noncentral chi-square with c+1 degrees of freedom and noncentrality
/// y0^2/(2t), drawn as a Poisson mixture of central chi-squares.
double exact_bessel_endpoint(double y0, double t, double c, Rng& rng);

/// Histogram of endpoints as a density w.r.t. mu: count / (n_paths *
/// cell_volume * y_cell^c). Paths outside the grid window are counted in
/// `outside`.
struct DensityHistogram {
  std::shared_ptr<const Grid> grid;
  std::vector<long> counts;
  std::vector<double> density;
  long total_paths = 0;
  long outside = 0;

  /// mu-mass of the histogram = fraction of paths inside the window.
  double mu_mass() const;
};

DensityHistogram estimate_density(std::span<const HalfSpacePoint> endpoints,
                                  std::shared_ptr<const Grid> grid);

/// Simulates n_paths independent endpoints; stream i of the master seed
/// drives path i, so the result is independent of the thread count.
std::vector<HalfSpacePoint> simulate_endpoints(const HalfSpacePoint& z0, double t,
                                               const OperatorParams& params,
                                               const PathConfig& config);

}  // namespace bheat
