#pragma once

namespace bheat {

/// Exponentially scaled modified Bessel function e^{-x} I_nu(x).
/// Requires nu > -1 and x >= 0. Power series (long-double accumulation)
/// below the crossover, uniform large-x asymptotic expansion above it.
double bessel_i_scaled(double nu, double x);

/// log of e^{-x} I_nu(x); finite for every x >= 0 except nu > 0, x = 0.
double log_bessel_i_scaled(double nu, double x);

/// Unscaled I_nu(x); overflows for x beyond roughly 700.
double bessel_i(double nu, double x);

}  // namespace bheat
