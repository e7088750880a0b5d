#include "bheat/measure.hpp"

#include <algorithm>
#include <cmath>

#include "bheat/rng.hpp"

namespace bheat {

double unit_ball_volume(int N) {
  if (N < 0) throw std::invalid_argument("unit_ball_volume: N >= 0 required");
  if (N == 0) return 1.0;
  return std::pow(M_PI, 0.5 * N) / std::tgamma(0.5 * N + 1.0);
}

MeasureContext make_measure_context(const OperatorParams& params) {
  return MeasureContext{params.c, unit_ball_volume(params.N)};
}

double ball_volume(const HalfSpacePoint& z0, double r, const OperatorParams& params) {
  if (!(r > 0.0)) throw std::invalid_argument("ball_volume: r > 0 required");
  if (z0.y < 0.0) throw std::invalid_argument("ball_volume: y0 >= 0 required");
  const double c = params.c;
  const double upper = std::pow(z0.y + r, c + 1.0);
  const double lower = (z0.y <= r) ? 0.0 : std::pow(z0.y - r, c + 1.0);
  return unit_ball_volume(params.N) * std::pow(r, params.N) * (upper - lower) / (c + 1.0);
}

double volume_envelope(const HalfSpacePoint& z0, double r, const OperatorParams& params) {
  if (!(r > 0.0)) throw std::invalid_argument("volume_envelope: r > 0 required");
  const double c = params.c;
  if (z0.y <= r) return std::pow(r, params.N + 1.0 + c);
  return std::pow(r, params.N + 1.0) * std::pow(z0.y, c);
}

double doubling_ratio_scan(const OperatorParams& params,
                           std::span<const DoublingSample> samples) {
  if (samples.empty())
    throw std::invalid_argument("doubling_ratio_scan: empty sample set");
  const double expo = params.N + 1.0 + pos_part(params.c);
  double sup = 0.0;
  for (const auto& smp : samples) {
    if (!(0.0 < smp.r && smp.r <= smp.s))
      throw std::invalid_argument("doubling_ratio_scan: need 0 < r <= s");
    const double vr = ball_volume(smp.z0, smp.r, params);
    const double vs = ball_volume(smp.z0, smp.s, params);
    const double q = (vs / vr) / std::pow(smp.s / smp.r, expo);
    sup = std::max(sup, q);
  }
  return sup;
}

std::pair<double, double> local_volume_bounds(const OperatorParams& params, double r0,
                                              double R0,
                                              std::span<const BallSample> samples) {
  if (samples.empty())
    throw std::invalid_argument("local_volume_bounds: empty sample set");
  const double up_expo = params.N + 1.0 - neg_part(params.c);
  const double lo_expo = params.N + 1.0 + pos_part(params.c);
  double c1 = 0.0;
  double c2 = std::numeric_limits<double>::infinity();
  for (const auto& smp : samples) {
    if (!(smp.r > 0.0 && smp.r <= r0 && smp.z.y >= 0.0 && smp.z.y <= R0))
      throw std::invalid_argument("local_volume_bounds: sample outside [0,r0]x[0,R0]");
    const double v = ball_volume(smp.z, smp.r, params);
    c1 = std::max(c1, v / std::pow(smp.r, up_expo));
    c2 = std::min(c2, v / std::pow(smp.r, lo_expo));
  }
  return {c1, c2};
}

std::vector<DoublingSample> random_doubling_samples(const OperatorParams& params,
                                                    std::size_t n, std::uint64_t seed) {
  Rng rng(seed, 101);
  std::vector<DoublingSample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    DoublingSample s;
    s.z0.x.assign(params.N, 0.0);
    for (int d = 0; d < params.N; ++d) s.z0.x[d] = rng.uniform(-10.0, 10.0);
    // Mix exact-boundary and generic centers so y0 = 0 is exercised.
    s.z0.y = (rng.uniform() < 0.1) ? 0.0 : rng.log_uniform(1e-3, 1e3);
    s.r = rng.log_uniform(1e-3, 1e2);
    s.s = s.r * rng.log_uniform(1.0, 1e3);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<BallSample> random_ball_samples(const OperatorParams& params, double r0,
                                            double R0, std::size_t n,
                                            std::uint64_t seed) {
  Rng rng(seed, 102);
  std::vector<BallSample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    BallSample s;
    s.z.x.assign(params.N, 0.0);
    for (int d = 0; d < params.N; ++d) s.z.x[d] = rng.uniform(-10.0, 10.0);
    s.z.y = (rng.uniform() < 0.1) ? 0.0 : rng.uniform(0.0, R0);
    s.r = r0 * rng.log_uniform(1e-6, 1.0);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace bheat
