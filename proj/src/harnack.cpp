#include "bheat/harnack.hpp"

#include <algorithm>
#include <cmath>

namespace bheat {

QuadraticGap max_quadratic_gap(std::span<const double> x, std::span<const double> y,
                               double C1, double C2) {
  if (x.size() != y.size())
    throw std::invalid_argument("max_quadratic_gap: dimension mismatch");
  if (!(C1 > 0.0 && C2 > 0.0 && C1 < C2))
    throw std::invalid_argument("max_quadratic_gap: need 0 < C1 < C2 (g is unbounded otherwise)");
  QuadraticGap out;
  out.xi_star.resize(x.size());
  double d2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.xi_star[i] = (C1 * x[i] - C2 * y[i]) / (C1 - C2);
    const double d = x[i] - y[i];
    d2 += d * d;
  }
  out.g_max = d2 / (1.0 / C1 - 1.0 / C2);
  return out;
}

double harnack_exponent(const OperatorParams& params) {
  return 0.5 * (params.N + 1.0 + pos_part(params.c));
}

double harnack_bound(double s, const HalfSpacePoint& z2, double t,
                     const HalfSpacePoint& z1, const OperatorParams& params, double C) {
  if (!(0.0 < s && s < t)) throw std::invalid_argument("harnack_bound: 0 < s < t required");
  if (!(C > 0.0)) throw std::invalid_argument("harnack_bound: C > 0 required");
  return C * std::pow(t / s, harnack_exponent(params)) *
         std::exp(C * dist2(z1, z2) / (t - s));
}

long garofalo_check(const SolutionEval& u, std::span<const PairSample> pairs,
                    const OperatorParams& params, double exponent_override,
                    double slack) {
  if (!params.is_drift_free() || params.c < 0.0)
    throw std::invalid_argument("garofalo_check: requires a = 0 and c >= 0");
  const double expo =
      exponent_override > 0.0 ? exponent_override : 0.5 * (params.N + 1.0 + params.c);
  long bad = 0;
  for (const auto& pr : pairs) {
    if (!(0.0 < pr.s && pr.s < pr.t))
      throw std::invalid_argument("garofalo_check: pair with s >= t");
    const double lhs = u(pr.s, pr.z2);
    const double rhs = u(pr.t, pr.z1) * std::pow(pr.t / pr.s, expo) *
                       std::exp(dist2(pr.z1, pr.z2) / (4.0 * (pr.t - pr.s)));
    if (lhs > rhs * (1.0 + slack)) ++bad;
  }
  return bad;
}

namespace {

long count_harnack_violations(const SolutionEval& u, std::span<const PairSample> pairs,
                              const OperatorParams& params, double C_pre, double C_rate,
                              double expo, double slack) {
  long bad = 0;
  for (const auto& pr : pairs) {
    const double lhs = u(pr.s, pr.z2);
    const double rhs = u(pr.t, pr.z1) * C_pre * std::pow(pr.t / pr.s, expo) *
                       std::exp(C_rate * dist2(pr.z1, pr.z2) / (pr.t - pr.s));
    if (lhs > rhs * (1.0 + slack)) ++bad;
  }
  return bad;
}

}  // namespace

HarnackReport fit_harnack_constant(const SolutionEval& u,
                                   std::span<const PairSample> fit,
                                   std::span<const PairSample> held_out,
                                   const OperatorParams& params,
                                   const HarnackFitOptions& options) {
  if (fit.empty()) throw std::invalid_argument("fit_harnack_constant: no pairs");
  for (const auto& pr : fit) {
    if (!(0.0 < pr.s && pr.s < pr.t))
      throw std::invalid_argument("fit_harnack_constant: pair with s >= t");
    if (!(u(pr.t, pr.z1) > 0.0) || !(u(pr.s, pr.z2) > 0.0))
      throw std::invalid_argument("fit_harnack_constant: u must be positive on pairs");
  }

  const double expo = harnack_exponent(params);
  auto violations = [&](std::span<const PairSample> pairs, double C) {
    const double rate = options.two_parameter ? options.fixed_rate : C;
    return count_harnack_violations(u, pairs, params, C, rate, expo,
                                    options.violation_slack);
  };

  if (violations(fit, options.c_max) > 0)
    throw std::runtime_error(
        "fit_harnack_constant: no feasible C <= c_max; input is probably not a "
        "positive solution");

  HarnackReport rep;
  rep.exponent = expo;
  rep.two_parameter = options.two_parameter;
  rep.fixed_rate = options.two_parameter ? options.fixed_rate : 0.0;
  rep.safety_margin = options.safety_margin;

  double lo = options.c_min, hi = options.c_max;
  if (violations(fit, lo) == 0) {
    rep.C = lo;  // already feasible at the lower endpoint
  } else {
    for (int i = 0; i < options.bisection_steps; ++i) {
      const double mid = std::sqrt(lo * hi);
      if (violations(fit, mid) == 0)
        hi = mid;
      else
        lo = mid;
    }
    rep.C = hi;
  }
  rep.fit_violations = violations(fit, rep.C);

  // Largest per-pair constant actually needed (diagnostic; bisected per pair).
  rep.max_needed_c = options.c_min;
  for (const auto& pr : fit) {
    double plo = options.c_min, phi = options.c_max;
    std::span<const PairSample> one(&pr, 1);
    if (violations(one, plo) == 0) continue;
    for (int i = 0; i < 40; ++i) {
      const double mid = std::sqrt(plo * phi);
      if (violations(one, mid) == 0)
        phi = mid;
      else
        plo = mid;
    }
    if (phi > rep.max_needed_c) {
      rep.max_needed_c = phi;
      rep.max_ratio_pair = pr;
    }
  }

  rep.held_out_violations =
      held_out.empty()
          ? 0
          : violations(held_out, rep.C * (1.0 + options.safety_margin));
  return rep;
}

}  // namespace bheat
