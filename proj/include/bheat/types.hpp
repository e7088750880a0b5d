#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bheat {

/// Positive part c+ = max(c, 0).
inline double pos_part(double c) { return c > 0.0 ? c : 0.0; }

/// Negative part c- = max(-c, 0), so that c = c+ - c-.
inline double neg_part(double c) { return c < 0.0 ? -c : 0.0; }

/// Problem instance for the operator
///   L = Delta_x + 2 a . grad_x D_y + D_yy + (c/y) D_y
/// on the half-space {(x,y) : x in R^N, y > 0} with the weighted Neumann
/// condition y^c D_y u -> 0 at y = 0. Requires c + 1 > 0 and |a| < 1.
struct OperatorParams {
  int N = 0;               // x-dimension, 0 allowed
  double c = 0.0;          // singularity exponent, c > -1
  std::vector<double> a;   // mixed-derivative coupling, length N, |a| < 1

  double a_norm() const {
    double s = 0.0;
    for (double ai : a) s += ai * ai;
    return std::sqrt(s);
  }
  bool is_drift_free() const {
    for (double ai : a)
      if (ai != 0.0) return false;
    return true;
  }
};

/// Validates (N, c, a) and returns the immutable problem instance.
/// Rejects c <= -1 (y^c not integrable at 0) and |a| >= 1 (loss of
/// ellipticity); positive definiteness of [[I, a], [a^T, 1]] is checked by
/// attempting its Cholesky factorization.
OperatorParams validate_params(int N, double c, std::vector<double> a);

/// Point of the closed half-space, y >= 0. Interior operations require y > 0.
struct HalfSpacePoint {
  std::vector<double> x;  // length N
  double y = 0.0;
};

inline HalfSpacePoint make_point(std::vector<double> x, double y) {
  return HalfSpacePoint{std::move(x), y};
}

/// Squared Euclidean distance |z1 - z2|^2 in R^{N+1}.
double dist2(const HalfSpacePoint& z1, const HalfSpacePoint& z2);

/// Cylindric ball Q(z0, r) = B(x0, r) x ]((y0-r)+, y0+r[ in the half-space.
struct CylinderBall {
  HalfSpacePoint center;
  double r = 0.0;

  bool contains(const HalfSpacePoint& z) const;
};

/// Parabolic cylinder ]t0 - r^2, t0[ x Q(z0, r).
struct ParabolicCylinder {
  double t0 = 0.0;
  HalfSpacePoint center;
  double r = 0.0;
};

}  // namespace bheat
