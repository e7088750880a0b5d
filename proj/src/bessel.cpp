#include "bheat/bessel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bheat {

namespace {

void check_args(double nu, double x) {
  if (!(nu > -1.0)) throw std::invalid_argument("bessel_i: nu > -1 required");
  if (!(x >= 0.0)) throw std::invalid_argument("bessel_i: x >= 0 required");
}

double series_crossover(double nu) { return std::max(35.0, nu * nu); }

/// ln of the series sum  sum_k (x^2/4)^k / (k! Gamma(nu+k+1)).
/// All terms are positive, so the accumulation carries no cancellation.
long double log_series_sum(double nu, double x) {
  const long double q = static_cast<long double>(x) * x / 4.0L;
  // First term 1/Gamma(nu+1), factored out: sum = (1/Gamma(nu+1)) * T.
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int k = 1; k < 100000; ++k) {
    term *= q / (static_cast<long double>(k) * (nu + k));
    sum += term;
    if (term < sum * 1e-21L) break;
  }
  return std::log(sum) - static_cast<long double>(std::lgamma(nu + 1.0));
}

/// ln of the scaled asymptotic value, valid for large x:
///   e^{-x} I_nu(x) ~ (2 pi x)^{-1/2} sum_k (-1)^k a_k(nu) / x^k,
///   a_k = prod_{j=1..k} (4 nu^2 - (2j-1)^2) / (k! 8^k).
long double log_asymptotic_scaled(double nu, double x) {
  const long double mu = 4.0L * nu * nu;
  long double term = 1.0L;
  long double sum = 1.0L;
  long double prev = std::numeric_limits<long double>::max();
  for (int k = 1; k < 60; ++k) {
    const long double odd = 2.0L * k - 1.0L;
    term *= -(mu - odd * odd) / (8.0L * k * static_cast<long double>(x));
    if (std::fabs(term) >= prev) break;  // divergent tail reached
    sum += term;
    prev = std::fabs(term);
    if (std::fabs(term) < 1e-21L * std::fabs(sum)) break;
  }
  constexpr long double pi = 3.141592653589793238462643383279502884L;
  return std::log(sum) - 0.5L * std::log(2.0L * pi * static_cast<long double>(x));
}

}  // namespace

double log_bessel_i_scaled(double nu, double x) {
  check_args(nu, x);
  if (x == 0.0) {
    if (nu == 0.0) return 0.0;
    if (nu > 0.0) return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::infinity();  // I_nu(0) = +inf for nu in (-1,0)
  }
  if (x < series_crossover(nu)) {
    const long double lg =
        static_cast<long double>(nu) * std::log(static_cast<long double>(x) / 2.0L) +
        log_series_sum(nu, x) - static_cast<long double>(x);
    return static_cast<double>(lg);
  }
  return static_cast<double>(log_asymptotic_scaled(nu, x));
}

double bessel_i_scaled(double nu, double x) {
  check_args(nu, x);
  if (x == 0.0) {
    if (nu == 0.0) return 1.0;
    if (nu > 0.0) return 0.0;
    return std::numeric_limits<double>::infinity();
  }
  if (x < series_crossover(nu)) {
    const long double lx = static_cast<long double>(x);
    const long double v = std::exp(static_cast<long double>(nu) * std::log(lx / 2.0L) +
                                   log_series_sum(nu, x) - lx);
    return static_cast<double>(v);
  }
  return static_cast<double>(std::exp(log_asymptotic_scaled(nu, x)));
}

double bessel_i(double nu, double x) {
  check_args(nu, x);
  if (x == 0.0) return (nu == 0.0) ? 1.0 : (nu > 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  const double lg = log_bessel_i_scaled(nu, x) + x;
  if (lg > 709.0) throw std::overflow_error("bessel_i: result overflows double");
  return std::exp(lg);
}

}  // namespace bheat
