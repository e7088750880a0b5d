#include "bheat/mc.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

namespace bheat {

namespace {

/// Lower-triangular square root B of I - a a^T (Cholesky, N <= 2).
std::array<double, 4> x_noise_factor(const OperatorParams& params) {
  const int N = params.N;
  std::array<double, 4> b{1.0, 0.0, 0.0, 1.0};
  if (N == 0) return b;
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) m(i, j) -= params.a[i] * params.a[j];
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("sample_endpoint: I - a a^T not positive definite");
  Eigen::MatrixXd L = llt.matrixL();
  b[0] = L(0, 0);
  if (N == 2) {
    b[1] = 0.0;
    b[2] = L(1, 0);
    b[3] = L(1, 1);
  }
  return b;
}

}  // namespace

HalfSpacePoint sample_endpoint(const HalfSpacePoint& z0, double t,
                               const OperatorParams& params, const PathConfig& config,
                               Rng& rng) {
  if (!(z0.y > 0.0)) throw std::invalid_argument("sample_endpoint: y0 > 0 required");
  if (!(t > 0.0)) throw std::invalid_argument("sample_endpoint: t > 0 required");

  if (config.reflection == ReflectionScheme::exact_bessel) {
    if (!params.is_drift_free())
      throw std::invalid_argument("sample_endpoint: exact_bessel requires a = 0");
    HalfSpacePoint z = z0;
    z.y = exact_bessel_endpoint(z0.y, t, params.c, rng);
    const double sd = std::sqrt(2.0 * t);
    for (int d = 0; d < params.N; ++d) z.x[d] += sd * rng.normal();
    return z;
  }

  const int N = params.N;
  const std::array<double, 4> B = x_noise_factor(params);
  const double a0 = N >= 1 ? params.a[0] : 0.0;
  const double a1 = N >= 2 ? params.a[1] : 0.0;
  const double dt = config.effective_dt(t);
  const long n_steps = std::max(1L, std::lround(std::ceil(t / dt - 1e-9)));
  const double h = t / static_cast<double>(n_steps);
  const double sqh = std::sqrt(2.0 * h);
  const double cdt = params.c * h;

  double y = z0.y;
  double x0 = N >= 1 ? z0.x[0] : 0.0;
  double x1 = N >= 2 ? z0.x[1] : 0.0;
  for (long s = 0; s < n_steps; ++s) {
    const double xi = rng.normal();
    // Clamped drift: |c/Y| h <= Y/2 prevents the step from overshooting 0.
    const double cap = 0.5 * y;
    const double drift = std::clamp(cdt / y, -cap, cap);
    y = std::fabs(y + drift + sqh * xi);
    if (y == 0.0) y = 1e-300;  // paths live in (0, inf)
    if (N >= 1) {
      const double e0 = rng.normal();
      if (N == 1) {
        x0 += sqh * (a0 * xi + B[0] * e0);
      } else {
        const double e1 = rng.normal();
        x0 += sqh * (a0 * xi + B[0] * e0);
        x1 += sqh * (a1 * xi + B[2] * e0 + B[3] * e1);
      }
    }
  }
  HalfSpacePoint z = z0;
  z.y = y;
  if (N >= 1) z.x[0] = x0;
  if (N >= 2) z.x[1] = x1;
  return z;
}

double exact_bessel_endpoint(double y0, double t, double c, Rng& rng) {
  if (!(c + 1.0 > 0.0)) throw std::invalid_argument("exact_bessel_endpoint: c + 1 > 0");
  if (!(t > 0.0)) throw std::invalid_argument("exact_bessel_endpoint: t > 0 required");
  if (!(y0 >= 0.0)) throw std::invalid_argument("exact_bessel_endpoint: y0 >= 0 required");
  const double dof = c + 1.0;
  const double lambda = y0 * y0 / (2.0 * t);
  const long k = rng.poisson(0.5 * lambda);
  // chi-square with dof + 2k degrees of freedom = Gamma((dof+2k)/2, 2).
  const double q = rng.gamma(0.5 * dof + static_cast<double>(k), 2.0);
  return std::sqrt(2.0 * t * q);
}

double DensityHistogram::mu_mass() const {
  const Grid& g = *grid;
  double m = 0.0;
  for (std::size_t i = 0; i < density.size(); ++i) m += density[i] * g.mu_cell(static_cast<int>(i % g.ny));
  return m;
}

DensityHistogram estimate_density(std::span<const HalfSpacePoint> endpoints,
                                  std::shared_ptr<const Grid> grid) {
  if (endpoints.size() < 1000)
    throw std::invalid_argument("estimate_density: need >= 1e3 endpoints");
  DensityHistogram h;
  h.grid = grid;
  const Grid& g = *grid;
  h.counts.assign(g.cells(), 0);
  h.density.assign(g.cells(), 0.0);
  h.total_paths = static_cast<long>(endpoints.size());

  auto inside = [&](const HalfSpacePoint& z) {
    if (z.y < 0.0 || z.y >= g.Y) return false;
    for (int d = 0; d < g.N; ++d)
      if (z.x[d] < -g.X || z.x[d] >= g.X) return false;
    return true;
  };
  for (const auto& z : endpoints) {
    if (!inside(z)) {
      ++h.outside;
      continue;
    }
    ++h.counts[g.locate(z)];
  }
  const double norm = static_cast<double>(h.total_paths) * g.cell_volume();
  for (std::size_t i = 0; i < h.counts.size(); ++i)
    h.density[i] = static_cast<double>(h.counts[i]) / (norm * g.wcell[i % g.ny]);
  return h;
}

std::vector<HalfSpacePoint> simulate_endpoints(const HalfSpacePoint& z0, double t,
                                               const OperatorParams& params,
                                               const PathConfig& config) {
  if (config.n_paths < 1)
    throw std::invalid_argument("simulate_endpoints: n_paths >= 1 required");
  std::vector<HalfSpacePoint> out(static_cast<std::size_t>(config.n_paths));
#pragma omp parallel for schedule(static)
  for (long i = 0; i < config.n_paths; ++i) {
    Rng rng(config.seed, static_cast<std::uint64_t>(i) + 1);
    out[static_cast<std::size_t>(i)] = sample_endpoint(z0, t, params, config, rng);
  }
  return out;
}

}  // namespace bheat
