#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bheat/types.hpp"

namespace bheat {

/// Context for the measure mu(dz) = y^c dx dy. w_N is the Lebesgue volume
/// of the N-dimensional unit ball, with w_0 := 1 so the pure half-line case
/// is admitted.
struct MeasureContext {
  double c = 0.0;
  double w_N = 1.0;
};

/// Lebesgue volume of the unit ball in R^N (1 for N = 0).
double unit_ball_volume(int N);

MeasureContext make_measure_context(const OperatorParams& params);

/// Exact mu-volume of the cylindric ball Q(z0, r):
///   V(z0, r) = w_N r^N [ (y0+r)^{c+1} - ((y0-r)+)^{c+1} ] / (c+1).
/// The lower endpoint term is exactly 0 when y0 <= r.
double ball_volume(const HalfSpacePoint& z0, double r, const OperatorParams& params);

/// Envelope f(z0, r) comparable with V(z0, r):
///   f = r^{N+1+c} when y0 <= r,  f = r^{N+1} y0^c when y0 > r.
double volume_envelope(const HalfSpacePoint& z0, double r, const OperatorParams& params);

/// One (z0, r, s) doubling probe with 0 < r <= s.
struct DoublingSample {
  HalfSpacePoint z0;
  double r = 0.0;
  double s = 0.0;
};

/// sup over samples of [V(z0,s)/V(z0,r)] / (s/r)^{N+1+c+}.
double doubling_ratio_scan(const OperatorParams& params,
                           std::span<const DoublingSample> samples);

/// One (z, r) probe for the local volume bounds.
struct BallSample {
  HalfSpacePoint z;
  double r = 0.0;
};

/// Empirical constants (C1, C2) with
///   C2 r^{N+1+c+} <= V(z, r) <= C1 r^{N+1-c-}
/// over the sampled (z, r) with r in (0, r0], y in [0, R0].
std::pair<double, double> local_volume_bounds(const OperatorParams& params, double r0,
                                              double R0,
                                              std::span<const BallSample> samples);

/// Seeded sample generators used by the scans and the CLI.
std::vector<DoublingSample> random_doubling_samples(const OperatorParams& params,
                                                    std::size_t n, std::uint64_t seed);
std::vector<BallSample> random_ball_samples(const OperatorParams& params, double r0,
                                            double R0, std::size_t n, std::uint64_t seed);

}  // namespace bheat
