#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "bheat/kernel.hpp"
#include "bheat/mc.hpp"

using namespace bheat;

namespace {

double phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// KS distance of sorted samples against a CDF.
double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double F = cdf(xs[i]);
    d = std::max(d, std::fabs(F - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(F - static_cast<double>(i + 1) / n));
  }
  return d;
}

/// CDF of |y0 + sqrt(2t) N| (reflected Gaussian endpoint at c = 0).
double folded_cdf(double y, double y0, double t) {
  const double sd = std::sqrt(2.0 * t);
  return phi((y - y0) / sd) - phi((-y - y0) / sd);
}

}  // namespace

TEST_CASE("poisson and gamma samplers match their first moments") {
  Rng rng(7, 3);
  for (double mean : {0.5, 8.0, 60.0, 400.0}) {
    const int n = 20000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double k = static_cast<double>(rng.poisson(mean));
      s += k;
      s2 += k * k;
    }
    const double m = s / n, var = s2 / n - m * m;
    const double se = std::sqrt(mean / n);
    CHECK(std::fabs(m - mean) <= 5.0 * se);
    CHECK(std::fabs(var - mean) <= 0.1 * mean);
  }
  for (double shape : {0.3, 1.0, 4.5}) {
    const int n = 20000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += rng.gamma(shape, 2.0);
    const double se = 2.0 * std::sqrt(shape / n);
    CHECK(std::fabs(s / n - 2.0 * shape) <= 5.0 * se);
  }
}

TEST_CASE("Euler endpoint at a=0, c=0 has the reflected Gaussian law") {
  auto params = validate_params(0, 0.0, {});
  PathConfig cfg;
  cfg.dt = 1e-4;
  cfg.n_paths = 100000;
  cfg.seed = 910;
  const double t = 0.1, y0 = 0.5;
  auto ends = simulate_endpoints({{}, y0}, t, params, cfg);
  std::vector<double> ys(ends.size());
  for (std::size_t i = 0; i < ends.size(); ++i) ys[i] = ends[i].y;
  const double d =
      ks_distance(std::move(ys), [&](double y) { return folded_cdf(y, y0, t); });
  CHECK(d <= 0.01);
}

TEST_CASE("exact Bessel endpoint: law and moments") {
  SUBCASE("c=0 reduces to the folded Gaussian") {
    Rng rng(11, 0);
    const double t = 0.25, y0 = 0.7;
    std::vector<double> ys(100000);
    for (auto& y : ys) y = exact_bessel_endpoint(y0, t, 0.0, rng);
    const double d =
        ks_distance(std::move(ys), [&](double y) { return folded_cdf(y, y0, t); });
    CHECK(d <= 0.01);
  }
  SUBCASE("mean of Y_t^2 is y0^2 + 2t(c+1)") {
    Rng rng(12, 0);
    for (double c : {-0.5, 0.5, 2.0}) {
      const double t = 0.3, y0 = 1.2;
      const int n = 200000;
      double s = 0.0, s2 = 0.0;
      for (int i = 0; i < n; ++i) {
        const double y = exact_bessel_endpoint(y0, t, c, rng);
        s += y * y;
        s2 += y * y * y * y;
      }
      const double mean = s / n;
      const double expect = y0 * y0 + 2.0 * t * (c + 1.0);
      const double se = std::sqrt((s2 / n - mean * mean) / n);
      CHECK_MESSAGE(std::fabs(mean - expect) <= 3.0 * se, "c=", c, " mean=", mean,
                    " expect=", expect);
    }
  }
  SUBCASE("t -> 0 concentrates at y0") {
    Rng rng(13, 0);
    const double y0 = 0.9;
    std::vector<double> ys(20001);
    for (auto& y : ys) y = exact_bessel_endpoint(y0, 1e-6, 1.0, rng);
    std::nth_element(ys.begin(), ys.begin() + 10000, ys.end());
    CHECK(ys[10000] == doctest::Approx(y0).epsilon(2e-2));
  }
}

TEST_CASE("exact-Bessel and Euler endpoints agree in distribution at a=0") {
  auto params = validate_params(0, 1.0, {});
  const double t = 0.1, y0 = 0.6;
  PathConfig euler;
  euler.dt = 1e-4;
  euler.n_paths = 100000;
  euler.seed = 2211;
  auto ee = simulate_endpoints({{}, y0}, t, params, euler);
  std::vector<double> es(ee.size());
  for (std::size_t i = 0; i < ee.size(); ++i) es[i] = ee[i].y;
  std::sort(es.begin(), es.end());

  Rng rng(3344, 0);
  std::vector<double> bs(100000);
  for (auto& y : bs) y = exact_bessel_endpoint(y0, t, 1.0, rng);
  std::sort(bs.begin(), bs.end());

  // Two-sample KS.
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < es.size() && j < bs.size()) {
    if (es[i] <= bs[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / es.size() -
                              static_cast<double>(j) / bs.size()));
  }
  CHECK(d <= 0.02);
}

TEST_CASE("one-step increment covariance matches 2 dt [[I,a],[a^T,1]]") {
  auto params = validate_params(2, 0.5, {0.4, -0.3});
  const double dt = 1e-3;
  PathConfig cfg;
  cfg.dt = dt;
  cfg.seed = 77;
  Rng rng(77, 1);
  const HalfSpacePoint z0{{0.0, 0.0}, 5.0};  // far from the boundary
  const int n = 60000;

  // Whiten with the inverse Cholesky factor of C = [[I,a],[a^T,1]]: the
  // whitened increments w = L^{-1} dz / sqrt(2 dt) are then iid N(0, I).
  const double a0 = params.a[0], a1 = params.a[1];
  // L for [[1,0,a0],[0,1,a1],[a0,a1,1]] (row-wise forward substitution below).
  const double l33 = std::sqrt(1.0 - a0 * a0 - a1 * a1);
  double sumsq = 0.0, cross01 = 0.0, cross02 = 0.0, cross12 = 0.0;
  for (int i = 0; i < n; ++i) {
    auto z = sample_endpoint(z0, dt, params, cfg, rng);
    const double s = 1.0 / std::sqrt(2.0 * dt);
    const double d0 = (z.x[0] - z0.x[0]) * s;
    const double d1 = (z.x[1] - z0.x[1]) * s;
    const double d2 = (z.y - z0.y) * s;
    const double w0 = d0;
    const double w1 = d1;
    const double w2 = (d2 - a0 * d0 - a1 * d1) / l33;
    sumsq += w0 * w0 + w1 * w1 + w2 * w2;
    cross01 += w0 * w1;
    cross02 += w0 * w2;
    cross12 += w1 * w2;
  }
  // chi^2 with 3n dof at the 1% two-sided level (normal approximation),
  // plus Bonferroni z-tests on the three whitened cross moments.
  const double dof = 3.0 * n;
  CHECK(std::fabs(sumsq - dof) <= 2.576 * std::sqrt(2.0 * dof) + 1.0);
  for (double cr : {cross01, cross02, cross12})
    CHECK(std::fabs(cr) / std::sqrt(static_cast<double>(n)) <= 2.935);
}

TEST_CASE("large c pushes mass away from the boundary") {
  const double t = 0.2, y0 = 0.5;
  PathConfig cfg;
  cfg.dt = 1e-3;
  cfg.n_paths = 20000;
  cfg.seed = 5;
  auto low_c = validate_params(0, 0.0, {});
  auto high_c = validate_params(0, 4.0, {});
  auto e0 = simulate_endpoints({{}, y0}, t, low_c, cfg);
  auto e4 = simulate_endpoints({{}, y0}, t, high_c, cfg);
  auto below = [](const std::vector<HalfSpacePoint>& es, double lvl) {
    long n = 0;
    for (const auto& z : es)
      if (z.y < lvl) ++n;
    return n;
  };
  CHECK(below(e4, 0.1) < below(e0, 0.1) / 4);
}

TEST_CASE("histogram density vs explicit kernel at a=0, c=1") {
  auto params = validate_params(0, 1.0, {});
  const double t = 0.15, y0 = 1.0;
  PathConfig cfg;
  cfg.dt = 5e-5;
  cfg.n_paths = 1000000;
  cfg.reflection = ReflectionScheme::exact_bessel;  // exact law, no Euler bias
  cfg.seed = 99;
  auto ends = simulate_endpoints({{}, y0}, t, params, cfg);
  auto grid = std::make_shared<const Grid>(build_grid(params, 0.0, 3.0, 1, 30));
  auto hist = estimate_density(ends, grid);

  CHECK(hist.mu_mass() <= 1.0 + 3.0 * 1e-3);
  CHECK(hist.mu_mass() >= 0.98);

  double worst = 0.0;
  for (int j = 0; j < grid->ny; ++j) {
    if (hist.counts[j] < 500) continue;
    // Cell-averaged kernel in the mu measure vs the histogram density.
    const double y_lo = j * grid->hy, y_hi = (j + 1) * grid->hy;
    const int m = 20;
    double pk = 0.0, mu = 0.0;
    for (int q = 0; q < m; ++q) {
      const double y = y_lo + (q + 0.5) * (y_hi - y_lo) / m;
      const double w = std::pow(y, params.c);
      pk += bessel_transition_density(t, y0, y, params.c) * w;
      mu += w;
    }
    pk /= mu;
    worst = std::max(worst, std::fabs(hist.density[j] - pk) / pk);
  }
  CHECK(worst <= 0.05);
}

TEST_CASE("estimate_density rejects tiny endpoint sets") {
  auto params = validate_params(0, 0.0, {});
  auto grid = std::make_shared<const Grid>(build_grid(params, 0.0, 1.0, 1, 8));
  std::vector<HalfSpacePoint> few(10, {{}, 0.5});
  CHECK_THROWS_AS(estimate_density(few, grid), std::invalid_argument);
}

TEST_CASE("sample_endpoint rejects boundary starts and exact_bessel with drift") {
  auto p0 = validate_params(0, 0.5, {});
  PathConfig cfg;
  cfg.dt = 1e-3;
  Rng rng(1, 1);
  CHECK_THROWS_AS(sample_endpoint({{}, 0.0}, 0.1, p0, cfg, rng), std::invalid_argument);
  auto pa = validate_params(1, 0.5, {0.5});
  cfg.reflection = ReflectionScheme::exact_bessel;
  CHECK_THROWS_AS(sample_endpoint({{0.0}, 1.0}, 0.1, pa, cfg, rng),
                  std::invalid_argument);
}

TEST_CASE("refining dt reduces the a=0 histogram error against the closed form") {
  auto params = validate_params(0, 0.5, {});
  const double t = 0.1, y0 = 0.4;
  auto grid = std::make_shared<const Grid>(build_grid(params, 0.0, 2.0, 1, 16));
  auto err_at = [&](double dt, std::uint64_t seed) {
    PathConfig cfg;
    cfg.dt = dt;
    cfg.n_paths = 400000;
    cfg.seed = seed;
    auto ends = simulate_endpoints({{}, y0}, t, params, cfg);
    auto hist = estimate_density(ends, grid);
    double worst = 0.0;
    for (int j = 0; j < grid->ny; ++j) {
      if (hist.counts[j] < 2000) continue;
      const double y = grid->ycenter[j];
      const double pk = bessel_transition_density(t, y0, y, params.c);
      worst = std::max(worst, std::fabs(hist.density[j] - pk) / pk);
    }
    return worst;
  };
  const double coarse = err_at(4e-3, 21);
  const double fine = err_at(1e-3, 22);
  CHECK(fine < coarse);
}
