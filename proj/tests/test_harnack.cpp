#include <doctest.h>

#include <cmath>
#include <vector>

#include "bheat/harnack.hpp"
#include "bheat/kernel.hpp"
#include "bheat/rng.hpp"

using namespace bheat;

namespace {

// Positive global solution built from the explicit a=0 kernel: a kernel
// column in its first argument from a fixed source point.
SolutionEval kernel_solution(const OperatorParams& params, const HalfSpacePoint& src) {
  return [params, src](double t, const HalfSpacePoint& z) {
    return explicit_kernel_a0(t, z, src, params);
  };
}

std::vector<PairSample> random_pairs(const OperatorParams& params, int n,
                                     std::uint64_t seed, double T = 1.0,
                                     double ymin = 0.05, double ymax = 2.5) {
  Rng rng(seed, 9);
  std::vector<PairSample> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    PairSample pr;
    pr.t = rng.log_uniform(0.02 * T, T);
    pr.s = pr.t * rng.log_uniform(0.05, 0.999);
    pr.z1.x.assign(params.N, 0.0);
    pr.z2.x.assign(params.N, 0.0);
    for (int d = 0; d < params.N; ++d) {
      pr.z1.x[d] = rng.uniform(-1.5, 1.5);
      pr.z2.x[d] = rng.uniform(-1.5, 1.5);
    }
    pr.z1.y = rng.log_uniform(ymin, ymax);
    pr.z2.y = rng.log_uniform(ymin, ymax);
    out.push_back(std::move(pr));
  }
  return out;
}

}  // namespace

TEST_CASE("max_quadratic_gap: closed form on hand cases") {
  SUBCASE("x = y gives zero maximum at xi = x") {
    std::vector<double> x{0.7, -0.2};
    auto gap = max_quadratic_gap(x, x, 1.0, 2.0);
    CHECK(gap.g_max == 0.0);
    CHECK(gap.xi_star[0] == doctest::Approx(0.7));
    CHECK(gap.xi_star[1] == doctest::Approx(-0.2));
  }
  SUBCASE("N=1: x=0, y=1, C1=1, C2=2") {
    std::vector<double> x{0.0}, y{1.0};
    auto gap = max_quadratic_gap(x, y, 1.0, 2.0);
    CHECK(gap.xi_star[0] == doctest::Approx(2.0));
    CHECK(gap.g_max == doctest::Approx(2.0));
    // g(2) = 1*4 - 2*1 = 2 indeed.
  }
  SUBCASE("rejects C1 >= C2") {
    std::vector<double> x{0.0}, y{1.0};
    CHECK_THROWS_AS(max_quadratic_gap(x, y, 2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(max_quadratic_gap(x, y, 1.0, 1.0), std::invalid_argument);
  }
}

TEST_CASE("max_quadratic_gap: translation invariance") {
  Rng rng(31, 0);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> x{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    std::vector<double> y{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const double c1 = rng.uniform(0.5, 2.0);
    const double c2 = c1 + rng.uniform(0.5, 2.0);
    auto g0 = max_quadratic_gap(x, y, c1, c2);
    const double v = rng.uniform(-5, 5);
    std::vector<double> xs = x, ys = y;
    for (auto& e : xs) e += v;
    for (auto& e : ys) e += v;
    auto g1 = max_quadratic_gap(xs, ys, c1, c2);
    CHECK(g1.g_max == doctest::Approx(g0.g_max).epsilon(1e-11));
    for (std::size_t d = 0; d < x.size(); ++d)
      CHECK(g1.xi_star[d] - g0.xi_star[d] == doctest::Approx(v).epsilon(1e-9));
  }
}

TEST_CASE("max_quadratic_gap: closed form vs dense grid search (N=1)") {
  Rng rng(32, 0);
  for (int rep = 0; rep < 100; ++rep) {
    const double x = rng.uniform(-2.0, 2.0), y = rng.uniform(-2.0, 2.0);
    const double c1 = rng.uniform(0.5, 2.0);
    const double c2 = c1 + rng.uniform(0.5, 2.0);
    std::vector<double> xv{x}, yv{y};
    auto gap = max_quadratic_gap(xv, yv, c1, c2);
    if (std::fabs(gap.xi_star[0]) > 8.0) {
      --rep;  // keep the maximizer inside the searched window
      continue;
    }
    double best = -1e300, best_xi = 0.0;
    const int n = 1000000;
    for (int i = 0; i <= n; ++i) {
      const double xi = -10.0 + 20.0 * i / n;
      const double g = c1 * (x - xi) * (x - xi) - c2 * (y - xi) * (y - xi);
      if (g > best) {
        best = g;
        best_xi = xi;
      }
    }
    CHECK(std::fabs(best - gap.g_max) <= 1e-9);
    CHECK(std::fabs(best_xi - gap.xi_star[0]) <= 2e-5);
  }
}

TEST_CASE("harnack_bound: direct evaluations") {
  auto p = validate_params(0, 0.0, {});
  HalfSpacePoint z{{}, 1.0};
  // z1 = z2, t = 2s, C = 1, N = 0, c = 0 -> 2^{1/2}.
  CHECK(harnack_bound(0.5, z, 1.0, z, p, 1.0) == doctest::Approx(std::sqrt(2.0)));
  // s -> t at z1 = z2 tends to 1.
  CHECK(harnack_bound(1.0 - 1e-12, z, 1.0, z, p, 1.0) == doctest::Approx(1.0));
  // c = -0.5 uses c+ = 0 in the exponent.
  auto pneg = validate_params(0, -0.5, {});
  CHECK(harnack_exponent(pneg) == doctest::Approx(0.5));
  CHECK(harnack_bound(0.5, z, 1.0, z, pneg, 1.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(harnack_bound(1.0, z, 0.5, z, p, 1.0), std::invalid_argument);
}

TEST_CASE("garofalo sharp inequality holds on kernel solutions (c >= 0, a = 0)") {
  for (double c : {0.0, 1.0}) {
    for (int N : {0, 1}) {
      auto params = validate_params(N, c, std::vector<double>(N, 0.0));
      auto u = kernel_solution(params, {std::vector<double>(N, 0.2), 0.9});
      auto pairs = random_pairs(params, 10000, 100 + static_cast<int>(c) + N);
      CHECK(garofalo_check(u, pairs, params) == 0);
    }
  }
}

TEST_CASE("garofalo negative control: corrupted exponent produces violations") {
  auto params = validate_params(0, 1.0, {});
  auto u = kernel_solution(params, {{}, 0.9});
  auto pairs = random_pairs(params, 10000, 321);
  // (N + c)/2 instead of (N + 1 + c)/2 starves the time factor for s << t.
  const double bad_expo = 0.5 * (params.N + params.c);
  CHECK(garofalo_check(u, pairs, params, bad_expo) > 0);
}

TEST_CASE("garofalo_check: constant solutions satisfy the bound trivially") {
  auto params = validate_params(0, 1.0, {});
  SolutionEval one = [](double, const HalfSpacePoint&) { return 1.0; };
  auto pairs = random_pairs(params, 1000, 5);
  CHECK(garofalo_check(one, pairs, params) == 0);
}

TEST_CASE("garofalo_check rejects a != 0 or c < 0") {
  auto pa = validate_params(1, 0.5, {0.5});
  auto pc = validate_params(0, -0.5, {});
  SolutionEval one = [](double, const HalfSpacePoint&) { return 1.0; };
  std::vector<PairSample> pairs{{0.1, 0.2, {{0.0}, 1.0}, {{0.0}, 1.0}}};
  CHECK_THROWS_AS(garofalo_check(one, pairs, pa), std::invalid_argument);
  std::vector<PairSample> pairs0{{0.1, 0.2, {{}, 1.0}, {{}, 1.0}}};
  CHECK_THROWS_AS(garofalo_check(one, pairs0, pc), std::invalid_argument);
}

TEST_CASE("fit_harnack_constant: u = 1 fits at the lower endpoint") {
  auto params = validate_params(1, 0.5, {0.0});
  SolutionEval one = [](double, const HalfSpacePoint&) { return 1.0; };
  auto pairs = random_pairs(params, 500, 6);
  auto rep = fit_harnack_constant(one, pairs, pairs, params);
  CHECK(rep.C == 1.0);
  CHECK(rep.fit_violations == 0);
  CHECK(rep.held_out_violations == 0);
  CHECK(rep.exponent == doctest::Approx(0.5 * (1 + 1 + 0.5)));
}

TEST_CASE("fit_harnack_constant on an a=0 kernel solution") {
  auto params = validate_params(0, 1.0, {});
  auto u = kernel_solution(params, {{}, 0.9});
  auto fit = random_pairs(params, 4000, 41);
  auto held = random_pairs(params, 4000, 42);
  auto rep = fit_harnack_constant(u, fit, held, params);
  CHECK(rep.C >= 1.0);
  CHECK(rep.C < 1e4);
  CHECK(rep.fit_violations == 0);
  CHECK(rep.held_out_violations == 0);

  SUBCASE("scale invariance: lambda u leaves the fit unchanged") {
    SolutionEval u5 = [&u](double t, const HalfSpacePoint& z) { return 5.0 * u(t, z); };
    auto rep5 = fit_harnack_constant(u5, fit, held, params);
    CHECK(rep5.C == doctest::Approx(rep.C).epsilon(1e-12));
  }

  SUBCASE("monotonicity: more pairs never decrease the fitted constant") {
    std::vector<PairSample> half(fit.begin(), fit.begin() + 2000);
    auto rep_half = fit_harnack_constant(u, half, {}, params);
    CHECK(rep_half.C <= rep.C * (1.0 + 1e-12));
  }

  SUBCASE("two-parameter mode at the Garofalo rate is feasible near C = 1") {
    // With the sharp rate 1/4 and exponent (N+1+c+)/2 = (N+1+c)/2 for c >= 0
    // the prefactor needed on kernel solutions stays close to 1.
    HarnackFitOptions opt;
    opt.two_parameter = true;
    opt.fixed_rate = 0.25;
    auto rep2 = fit_harnack_constant(u, fit, held, params, opt);
    CHECK(rep2.C >= 1.0);
    CHECK(rep2.C <= 1.5);
    CHECK(rep2.held_out_violations == 0);
  }
}

TEST_CASE("time-shift consistency: shifted windows keep the no-time-factor constant finite") {
  // For pairs from a solution on a shifted window the (t/s) factor tends to
  // 1; fitting with the exponent suppressed must stay feasible as the shift
  // grows (the mechanism behind the negative-time Harnack corollary).
  auto params = validate_params(0, 1.0, {});
  auto u = kernel_solution(params, {{}, 0.9});
  Rng rng(71, 0);
  double prev_c = 0.0;
  for (double shift : {0.0, 4.0, 16.0}) {
    // Window [shift + 1, shift + 2]: u is global, so this is u restricted.
    std::vector<PairSample> pairs;
    for (int i = 0; i < 2000; ++i) {
      PairSample pr;
      pr.t = shift + 1.0 + rng.uniform(0.5, 1.0);
      pr.s = shift + 1.0 + rng.uniform(0.0, 0.49);
      pr.z1 = {{}, rng.log_uniform(0.1, 2.0)};
      pr.z2 = {{}, rng.log_uniform(0.1, 2.0)};
      pairs.push_back(std::move(pr));
    }
    auto rep = fit_harnack_constant(u, pairs, {}, params);
    CHECK(rep.C < 1e3);
    if (shift > 0.0) CHECK(rep.C <= std::max(prev_c, 2.0) * 2.0);
    prev_c = rep.C;
  }
}
