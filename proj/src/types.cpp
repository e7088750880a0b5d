#include "bheat/types.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

namespace bheat {

OperatorParams validate_params(int N, double c, std::vector<double> a) {
  if (N < 0) throw std::invalid_argument("validate_params: N must be >= 0");
  if (static_cast<int>(a.size()) != N)
    throw std::invalid_argument("validate_params: a must have length N");
  if (!(c + 1.0 > 0.0))
    throw std::invalid_argument(
        "validate_params: c + 1 > 0 required (y^c must be integrable at 0), got c = " +
        std::to_string(c));

  double a2 = 0.0;
  for (double ai : a) {
    if (!std::isfinite(ai)) throw std::invalid_argument("validate_params: a has non-finite entry");
    a2 += ai * ai;
  }
  if (!(a2 < 1.0))
    throw std::invalid_argument("validate_params: |a| < 1 required (ellipticity), got |a| = " +
                                std::to_string(std::sqrt(a2)));

  // Square-root factorization of the diffusion matrix [[I, a], [a^T, 1]].
  Eigen::MatrixXd Q(N + 1, N + 1);
  Q.setIdentity();
  for (int i = 0; i < N; ++i) {
    Q(i, N) = a[i];
    Q(N, i) = a[i];
  }
  Eigen::LLT<Eigen::MatrixXd> llt(Q);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("validate_params: [[I,a],[a^T,1]] is not positive definite");

  OperatorParams p;
  p.N = N;
  p.c = c;
  p.a = std::move(a);
  return p;
}

double dist2(const HalfSpacePoint& z1, const HalfSpacePoint& z2) {
  if (z1.x.size() != z2.x.size())
    throw std::invalid_argument("dist2: dimension mismatch");
  double s = (z1.y - z2.y) * (z1.y - z2.y);
  for (std::size_t i = 0; i < z1.x.size(); ++i) {
    const double d = z1.x[i] - z2.x[i];
    s += d * d;
  }
  return s;
}

bool CylinderBall::contains(const HalfSpacePoint& z) const {
  if (z.y < 0.0) return false;
  const double ylo = pos_part(center.y - r);
  if (!(z.y > ylo && z.y < center.y + r)) return false;
  double dx2 = 0.0;
  for (std::size_t i = 0; i < z.x.size(); ++i) {
    const double d = z.x[i] - center.x[i];
    dx2 += d * d;
  }
  return dx2 < r * r;
}

}  // namespace bheat
