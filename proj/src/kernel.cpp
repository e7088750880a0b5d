#include "bheat/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "bheat/bessel.hpp"
#include "bheat/measure.hpp"

namespace bheat {

double bessel_transition_density(double t, double y1, double y2, double c) {
  if (!(t > 0.0)) throw std::invalid_argument("bessel_transition_density: t > 0 required");
  if (!(y1 > 0.0 && y2 > 0.0))
    throw std::invalid_argument("bessel_transition_density: y1, y2 > 0 required");
  const double nu = 0.5 * (c - 1.0);
  const double w = y1 * y2 / (2.0 * t);
  // log form keeps the (y1 y2)^{-nu} and I_nu((y1 y2)/2t) factors paired.
  const double lg = -std::log(2.0 * t) - nu * std::log(y1 * y2) +
                    log_bessel_i_scaled(nu, w) - (y1 - y2) * (y1 - y2) / (4.0 * t);
  return std::exp(lg);
}

double explicit_kernel_a0(double t, const HalfSpacePoint& z1, const HalfSpacePoint& z2,
                          const OperatorParams& params) {
  if (!params.is_drift_free())
    throw std::invalid_argument("explicit_kernel_a0: closed form requires a = 0");
  if (!(t > 0.0)) throw std::invalid_argument("explicit_kernel_a0: t > 0 required");
  double gx = 1.0;
  if (params.N > 0) {
    double dx2 = 0.0;
    for (int d = 0; d < params.N; ++d) {
      const double dd = z1.x[d] - z2.x[d];
      dx2 += dd * dd;
    }
    gx = std::pow(4.0 * M_PI * t, -0.5 * params.N) * std::exp(-dx2 / (4.0 * t));
  }
  return gx * bessel_transition_density(t, z1.y, z2.y, params.c);
}

SolutionField numerical_kernel_column(double t, const HalfSpacePoint& source,
                                      const OperatorParams& params,
                                      std::shared_ptr<const Grid> grid,
                                      const SolverConfig& config, ColumnSide side) {
  if (!(t > 0.0)) throw std::invalid_argument("numerical_kernel_column: t > 0 required");
  SolutionField u0 = point_mass_field(grid, source);
  auto traj = solve(u0, t, params, config, {}, side == ColumnSide::second);
  return traj.back();
}

namespace {

// Weight factor y^{-c/2} (1 ^ y/sqrt t)^{c/2}, evaluated branchwise: the two
// powers collapse to t^{-c/4} below sqrt(t), avoiding 0 * inf at y -> 0.
double weight_factor(double y, double t, double c) {
  const double rt = std::sqrt(t);
  if (y <= rt) return std::pow(t, -0.25 * c);
  return std::pow(y, -0.5 * c);
}

}  // namespace

double envelope_value(double t, const HalfSpacePoint& z1, const HalfSpacePoint& z2,
                      const OperatorParams& params, double C, double k,
                      EnvelopeForm form) {
  if (!(C > 0.0 && k > 0.0))
    throw std::invalid_argument("envelope_value: C, k > 0 required");
  if (!(t > 0.0)) throw std::invalid_argument("envelope_value: t > 0 required");
  const double gauss = std::exp(-dist2(z1, z2) / (k * t));
  switch (form) {
    case EnvelopeForm::weight:
      return C * std::pow(t, -0.5 * (params.N + 1)) * weight_factor(z1.y, t, params.c) *
             weight_factor(z2.y, t, params.c) * gauss;
    case EnvelopeForm::weight_onesided_z1: {
      const double f = weight_factor(z1.y, t, params.c);
      return C * std::pow(t, -0.5 * (params.N + 1)) * f * f * gauss;
    }
    case EnvelopeForm::weight_onesided_z2: {
      const double f = weight_factor(z2.y, t, params.c);
      return C * std::pow(t, -0.5 * (params.N + 1)) * f * f * gauss;
    }
    case EnvelopeForm::volume: {
      const double rt = std::sqrt(t);
      return C / std::sqrt(ball_volume(z1, rt, params) * ball_volume(z2, rt, params)) *
             gauss;
    }
  }
  throw std::logic_error("envelope_value: unknown form");
}

std::pair<double, double> equivalence_factor_check(
    double c, double eps, std::span<const std::pair<double, double>> samples) {
  if (!(eps > 0.0)) throw std::invalid_argument("equivalence_factor_check: eps > 0");
  if (samples.empty())
    throw std::invalid_argument("equivalence_factor_check: empty sample set");
  auto factor = [c](double y) {
    // y^{-c/2} (1 ^ y)^{c/2} with the small-y branch collapsed.
    return y <= 1.0 ? 1.0 : std::pow(y, -0.5 * c);
  };
  double c1 = std::numeric_limits<double>::infinity(), c2 = 0.0;
  for (const auto& [y1, y2] : samples) {
    if (!(y1 > 0.0 && y2 > 0.0))
      throw std::invalid_argument("equivalence_factor_check: y1, y2 > 0 required");
    const double ratio = factor(y1) / factor(y2);
    const double gap = (y1 - y2) * (y1 - y2);
    c1 = std::min(c1, ratio * std::exp(eps * gap));
    c2 = std::max(c2, ratio * std::exp(-eps * gap));
  }
  return {c1, c2};
}

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i)
    g[i] = lo * std::pow(hi / lo, n == 1 ? 0.0 : static_cast<double>(i) / (n - 1));
  return g;
}

}  // namespace

KernelEstimate fit_bound_constants(std::span<const KernelSample> fit,
                                   std::span<const KernelSample> held_out,
                                   const OperatorParams& params, EnvelopeForm form,
                                   const FitOptions& options) {
  if (fit.size() < 100)
    throw std::invalid_argument("fit_bound_constants: need >= 100 samples");
  double pmax = 0.0;
  for (const auto& s : fit) pmax = std::max(pmax, s.p);
  if (!(pmax > 0.0))
    throw std::invalid_argument("fit_bound_constants: all samples are zero");
  const double floor = options.floor_fraction * pmax;
  long above = 0;
  for (const auto& s : fit)
    if (s.p >= floor) ++above;
  if (above < 2)
    throw std::invalid_argument("fit_bound_constants: degenerate sample set");

  const auto ks = log_grid(options.k_min, options.k_max, options.k_points);
  std::vector<double> c_up(ks.size()), c_low(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    double up = 0.0, low = std::numeric_limits<double>::infinity();
    for (const auto& s : fit) {
      const double shape = envelope_value(s.t, s.z1, s.z2, params, 1.0, ks[i], form);
      if (shape > 0.0) up = std::max(up, s.p / shape);
      if (s.p >= floor && shape > 0.0) low = std::min(low, s.p / shape);
    }
    c_up[i] = up;
    c_low[i] = low;
  }

  // Plateau selection: smallest k whose C_up is within the tie tolerance of
  // the global min (ties broken toward small k), and symmetrically the
  // largest k for the lower constant.
  const double up_best = *std::min_element(c_up.begin(), c_up.end());
  const double low_best = *std::max_element(c_low.begin(), c_low.end());
  std::size_t iu = 0, il = ks.size() - 1;
  while (c_up[iu] > up_best * (1.0 + options.tie_tolerance)) ++iu;
  while (c_low[il] < low_best * (1.0 - options.tie_tolerance)) --il;

  KernelEstimate est;
  est.form = form;
  est.k_up = ks[iu];
  est.C_up = c_up[iu];
  est.k_low = ks[il];
  est.C_low = c_low[il];
  est.n_samples = static_cast<long>(fit.size());
  est.violation_count = count_envelope_violations(est, fit, params, options.violation_slack);
  est.held_out_violations =
      held_out.empty() ? 0 : count_envelope_violations(est, held_out, params, options.violation_slack);
  return est;
}

long count_envelope_violations(const KernelEstimate& est,
                               std::span<const KernelSample> samples,
                               const OperatorParams& params, double slack) {
  double pmax = 0.0;
  for (const auto& s : samples) pmax = std::max(pmax, s.p);
  const double floor = 1e-8 * pmax;
  long bad = 0;
  for (const auto& s : samples) {
    const double up =
        envelope_value(s.t, s.z1, s.z2, params, est.C_up, est.k_up, est.form);
    if (s.p > up * (1.0 + slack)) {
      ++bad;
      continue;
    }
    if (s.p >= floor) {
      const double low =
          envelope_value(s.t, s.z1, s.z2, params, est.C_low, est.k_low, est.form);
      if (s.p < low * (1.0 - slack)) ++bad;
    }
  }
  return bad;
}

}  // namespace bheat
