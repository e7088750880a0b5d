#include "bheat/barrier.hpp"

#include <algorithm>
#include <cmath>

#include "bheat/kernel.hpp"

namespace bheat {

namespace {

double norm2(const HalfSpacePoint& z) {
  double s = z.y * z.y;
  for (double xi : z.x) s += xi * xi;
  return s;
}

}  // namespace

namespace {

// The formula itself is defined for every t < delta; the public entry point
// additionally enforces the barrier's domain t >= 0. The finite-difference
// route needs evaluations slightly below 0.
double barrier_value_unchecked(double t, const HalfSpacePoint& z,
                               const BarrierParams& bp) {
  const double dt = bp.delta - t;
  return std::pow(dt, -bp.alpha) * std::exp(bp.kappa * norm2(z) / dt);
}

}  // namespace

double barrier_value(double t, const HalfSpacePoint& z, const BarrierParams& bp) {
  if (!(t >= 0.0 && t < bp.delta))
    throw std::invalid_argument("barrier_value: 0 <= t < delta required");
  return barrier_value_unchecked(t, z, bp);
}

namespace {

/// Closed-form residual factor (residual = factor * v).
double residual_factor(double t, const HalfSpacePoint& z, const BarrierParams& bp,
                       const OperatorParams& params) {
  const double dt = bp.delta - t;
  const double k = bp.kappa;
  double ax = 0.0;
  for (int d = 0; d < params.N; ++d) ax += params.a[d] * z.x[d];
  return bp.alpha / dt + (k - 4.0 * k * k) * norm2(z) / (dt * dt) -
         8.0 * k * k * ax * z.y / (dt * dt) -
         2.0 * k * (params.N + 1.0 + params.c) / dt;
}

/// Fourth-order central first and second derivatives of f at 0 with step h.
template <class F>
double d1_fd(const F& f, double h) {
  return (-f(2.0 * h) + 8.0 * f(h) - 8.0 * f(-h) + f(-2.0 * h)) / (12.0 * h);
}
template <class F>
double d2_fd(const F& f, double h) {
  return (-f(2.0 * h) + 16.0 * f(h) - 30.0 * f(0.0) + 16.0 * f(-h) - f(-2.0 * h)) /
         (12.0 * h * h);
}

}  // namespace

double barrier_residual_fd(double t, const HalfSpacePoint& z, const BarrierParams& bp,
                           const OperatorParams& params) {
  const double dt_rem = bp.delta - t;
  // Steps proportional to the local exponent scale: the argument of the
  // exponential changes by at most ~eta per stencil point, so fourth-order
  // truncation and double roundoff are balanced near 1e-9 relative.
  const double eta = 0.01;
  const double znorm = std::sqrt(norm2(z));
  const double zscale = eta * dt_rem / (2.0 * bp.kappa * (1.0 + znorm));
  const double erate = bp.alpha / dt_rem + bp.kappa * norm2(z) / (dt_rem * dt_rem);
  const double ht = std::min(eta / (erate + 1.0), 0.2 * dt_rem);
  const double hz = std::min(zscale, 0.25 * z.y);

  auto v_at = [&](double tt, const HalfSpacePoint& zz) {
    return barrier_value_unchecked(tt, zz, bp);
  };
  const double vt = d1_fd([&](double e) { return v_at(t + e, z); }, ht);

  auto shift = [&](int axis, double e) {  // axis -1 = y, else x_axis
    HalfSpacePoint w = z;
    if (axis < 0)
      w.y += e;
    else
      w.x[axis] += e;
    return w;
  };
  double lap_x = 0.0;
  for (int d = 0; d < params.N; ++d)
    lap_x += d2_fd([&](double e) { return v_at(t, shift(d, e)); }, hz);
  const double dyy = d2_fd([&](double e) { return v_at(t, shift(-1, e)); }, hz);
  const double dy = d1_fd([&](double e) { return v_at(t, shift(-1, e)); }, hz);
  double cross = 0.0;
  for (int d = 0; d < params.N; ++d) {
    auto dy_of_xshift = [&](double ex) {
      HalfSpacePoint w = shift(d, ex);
      return d1_fd([&](double ey) {
        HalfSpacePoint w2 = w;
        w2.y += ey;
        return v_at(t, w2);
      }, hz);
    };
    cross += 2.0 * params.a[d] * d1_fd(dy_of_xshift, hz);
  }
  const double lv = lap_x + cross + dyy + params.c / z.y * dy;
  return vt - lv;
}

double barrier_residual(double t, const HalfSpacePoint& z, const BarrierParams& bp,
                        const OperatorParams& params, double check_tol) {
  if (!(z.y > 0.0)) throw std::invalid_argument("barrier_residual: y > 0 required");
  const double v = barrier_value(t, z, bp);
  const double closed = residual_factor(t, z, bp, params) * v;
  // The (c/y) D_y term cannot be finite-differenced in doubles once y is
  // tiny (D_y v ~ y while c/y ~ 1/y); the cross-check runs where it is
  // well conditioned. The closed form itself is exact for all y > 0.
  if (z.y >= 1e-3) {
    const double fd = barrier_residual_fd(t, z, bp, params);
    if (std::fabs(closed - fd) > check_tol * (std::fabs(closed) + std::fabs(fd) + 1.0))
      throw std::runtime_error(
          "barrier_residual: derivative table disagrees with the finite-difference "
          "route; closed=" + std::to_string(closed) + " fd=" + std::to_string(fd));
  }
  return closed;
}

std::pair<double, double> admissible_kappa(const OperatorParams& params) {
  // The cross term of the residual is -8 k^2 (a.x) y/(d-t)^2; bounding
  // |2 (a.x) y| <= |a| |z|^2 twice gives k - 4k^2 - 4k^2 |a| >= 0.
  return {0.0, 1.0 / (4.0 + 4.0 * params.a_norm())};
}

double barrier_alpha(const OperatorParams& params, double kappa, double margin) {
  return 2.0 * kappa * (params.N + 1.0 + pos_part(params.c)) + margin;
}

bool max_principle_scenario(const OperatorParams& params,
                            const MaxPrincipleScenario& scenario,
                            const SolverConfig& config) {
  SolverConfig cfg = config;
  cfg.scheme = Scheme::monotone_implicit;
  SolutionField u = make_field(scenario.grid);
  const Grid& g = *scenario.grid;
  for (std::size_t i = 0; i < g.cells(); ++i) {
    const double v = scenario.u0(g.point(i));
    if (v > 0.0)
      throw std::invalid_argument("max_principle_scenario: datum must be <= 0");
    u.u[i] = v;
  }
  const long n_steps = std::max(1L, std::lround(std::ceil(scenario.T / cfg.dt)));
  cfg.dt = scenario.T / static_cast<double>(n_steps);
  Stepper st(scenario.grid, params, cfg);
  for (long k = 0; k < n_steps; ++k) {
    st.advance(u);
    if (u.u.maxCoeff() > scenario.tolerance) return false;
  }
  return true;
}

double representation_check(const SolutionField& u0, double T,
                            const OperatorParams& params, const SolverConfig& config,
                            const RepresentationOptions& options) {
  const Grid& g = *u0.grid;
  for (Eigen::Index i = 0; i < u0.u.size(); ++i)
    if (u0.u[i] < 0.0)
      throw std::invalid_argument("representation_check: u0 >= 0 required");

  auto traj = solve(u0, T, params, config);
  const SolutionField& direct = traj.back();

  // Superposition of kernel columns over the datum cells.
  Eigen::VectorXd super = Eigen::VectorXd::Zero(direct.u.size());
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < g.cells(); ++i)
    if (u0.u[i] > options.support_floor) support.push_back(i);
  if (support.empty())
    throw std::invalid_argument("representation_check: datum has empty support");

  if (options.method == RepresentationMethod::explicit_kernel) {
    if (!params.is_drift_free())
      throw std::invalid_argument("representation_check: explicit kernel needs a = 0");
    for (std::size_t i = 0; i < g.cells(); ++i) {
      const HalfSpacePoint zi = g.point(i);
      double acc = 0.0;
      for (std::size_t s : support) {
        const HalfSpacePoint zs = g.point(s);
        acc += explicit_kernel_a0(T, zi, zs, params) * u0.u[s] *
               g.mu_cell(static_cast<int>(s % g.ny));
      }
      super[i] = acc;
    }
  } else {
    for (std::size_t s : support) {
      const SolutionField col = numerical_kernel_column(
          T, g.point(s), params, u0.grid, config, ColumnSide::first);
      super += (u0.u[s] * g.mu_cell(static_cast<int>(s % g.ny))) * col.u;
    }
  }

  const double floor = options.compare_floor_frac * direct.u.maxCoeff();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < direct.u.size(); ++i) {
    if (direct.u[i] < floor) continue;
    worst = std::max(worst, std::fabs(super[i] - direct.u[i]) / direct.u[i]);
  }
  return worst;
}

double mean_value_constant(const Trajectory& traj,
                           std::span<const ParabolicCylinder> cylinders, double p,
                           long* skipped) {
  if (traj.empty()) throw std::invalid_argument("mean_value_constant: empty trajectory");
  if (!(p > 0.0 && p <= 2.0))
    throw std::invalid_argument("mean_value_constant: p in (0, 2] required");
  const Grid& g = *traj.front().grid;
  long skip = 0;
  double sup_const = 0.0;

  for (const auto& cyl : cylinders) {
    // Cylinders must sit inside the computed window minus a 2-cell margin.
    const double margin_y = 2.0 * g.hy;
    if (cyl.center.y + cyl.r > g.Y - margin_y || cyl.t0 > traj.back().t)
      throw std::invalid_argument("mean_value_constant: cylinder exits the domain");
    for (int d = 0; d < g.N; ++d)
      if (std::fabs(cyl.center.x[d]) + cyl.r > g.X - 2.0 * g.hx[d])
        throw std::invalid_argument("mean_value_constant: cylinder exits the domain");

    CylinderBall full{cyl.center, cyl.r};
    CylinderBall half{cyl.center, 0.5 * cyl.r};
    const double t_lo_full = cyl.t0 - cyl.r * cyl.r;
    const double t_lo_half = cyl.t0 - 0.25 * cyl.r * cyl.r;

    double sup_half = 0.0;
    double mean_acc = 0.0, mu_acc = 0.0;
    double prev_t = t_lo_full;
    for (const auto& snap : traj) {
      if (snap.t <= t_lo_full || snap.t > cyl.t0) continue;
      const double dt_w = snap.t - prev_t;  // left Riemann sum in time
      prev_t = snap.t;
      for (std::size_t i = 0; i < g.cells(); ++i) {
        const HalfSpacePoint z = g.point(i);
        if (!full.contains(z)) continue;
        const double mu = g.mu_cell(static_cast<int>(i % g.ny)) * dt_w;
        mean_acc += std::pow(std::fabs(snap.u[i]), p) * mu;
        mu_acc += mu;
        if (snap.t > t_lo_half && half.contains(z))
          sup_half = std::max(sup_half, std::fabs(snap.u[i]));
      }
    }
    // The zero extension for s < 0 contributes zeros to the mean: account
    // for the part of the time window below the first computed snapshot.
    if (t_lo_full < 0.0) {
      double vol = 0.0;
      for (std::size_t i = 0; i < g.cells(); ++i)
        if (full.contains(g.point(i))) vol += g.mu_cell(static_cast<int>(i % g.ny));
      mu_acc += vol * (std::min(cyl.t0, 0.0) - t_lo_full);
    }
    if (mean_acc == 0.0 || mu_acc == 0.0) {
      ++skip;
      continue;
    }
    sup_const = std::max(sup_const, sup_half / std::pow(mean_acc / mu_acc, 1.0 / p));
  }
  if (skipped) *skipped = skip;
  return sup_const;
}

GrowthReport growth_functionals(const Trajectory& traj, double beta, double p,
                                std::span<const double> radii) {
  if (traj.empty()) throw std::invalid_argument("growth_functionals: empty trajectory");
  const Grid& g = *traj.front().grid;
  GrowthReport rep;
  rep.p = p;
  rep.beta = beta;
  std::vector<double> ball_acc(radii.size(), 0.0);

  double prev_t = 0.0;
  for (const auto& snap : traj) {
    const double dt_w = snap.t - prev_t;
    prev_t = snap.t;
    for (std::size_t i = 0; i < g.cells(); ++i) {
      const HalfSpacePoint z = g.point(i);
      const double z2 = [&] {
        double s = z.y * z.y;
        for (double xi : z.x) s += xi * xi;
        return s;
      }();
      const double au = std::fabs(snap.u[i]);
      rep.pointwise_C = std::max(rep.pointwise_C, au * std::exp(-beta * z2));
      const double mu = g.mu_cell(static_cast<int>(i % g.ny)) * dt_w;
      rep.weighted_integral += std::exp(-beta * z2) * std::pow(au, p) * mu;
      for (std::size_t r = 0; r < radii.size(); ++r) {
        CylinderBall ball{HalfSpacePoint{std::vector<double>(g.N, 0.0), 0.0}, radii[r]};
        if (ball.contains(z)) ball_acc[r] += std::pow(au, p) * mu;
      }
    }
  }
  for (std::size_t r = 0; r < radii.size(); ++r)
    rep.ball_integrals.emplace_back(radii[r], ball_acc[r]);
  return rep;
}

}  // namespace bheat
