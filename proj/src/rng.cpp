#include "strucrep/rng.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

namespace strucrep {

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

SymTensor2 Rng::sym_tensor() {
  std::array<double, 6> c{};
  for (double& x : c) x = uniform(-1.0, 1.0);
  return SymTensor2{c};
}

SymTensor2 Rng::spd_tensor() {
  Mat3 b;
  for (double& x : b.a) x = uniform(-1.0, 1.0);
  return SymTensor2::symmetric_part(b.transpose() * b) + 0.1 * SymTensor2::identity();
}

Mat3 Rng::orthogonal() {
  Eigen::Matrix3d g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = normal();
  Eigen::HouseholderQR<Eigen::Matrix3d> qr(g);
  Eigen::Matrix3d q = qr.householderQ();
  const Eigen::Matrix3d r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < 3; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  Mat3 out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out(i, j) = q(i, j);
  return out;
}

Mat3 Rng::rotation_about_k() { return strucrep::rotation_about_k(uniform(0.0, 2.0 * std::numbers::pi)); }

Mat3 rotation_about_k(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return Mat3{{c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0}};
}

}  // namespace strucrep
