#include "strucrep/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "strucrep/error.hpp"

namespace strucrep {

double Mat3::max_abs() const {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

bool Mat3::is_finite() const {
  return std::all_of(a.begin(), a.end(), [](double x) { return std::isfinite(x); });
}

double max_abs_diff(const Mat3& x, const Mat3& y) { return (x - y).max_abs(); }

// ---------------------------------------------------------------------------
// SymTensor2

namespace {
constexpr std::size_t kSymIndex[3][3] = {{0, 3, 4}, {3, 1, 5}, {4, 5, 2}};
}

SymTensor2 SymTensor2::symmetric_part(const Mat3& m) {
  return SymTensor2{{m(0, 0), m(1, 1), m(2, 2), 0.5 * (m(0, 1) + m(1, 0)),
                     0.5 * (m(0, 2) + m(2, 0)), 0.5 * (m(1, 2) + m(2, 1))}};
}

SymTensor2 SymTensor2::from_matrix(const Mat3& m, double tol) {
  if (!m.is_finite()) throw ValidationError("tensor has non-finite entries");
  const double defect = max_abs_diff(m, m.transpose());
  if (defect > tol * std::max(1.0, m.max_abs())) {
    std::ostringstream os;
    os << "tensor is not symmetric: max |A - A^T| = " << defect;
    throw ValidationError(os.str());
  }
  return symmetric_part(m);
}

double SymTensor2::operator()(std::size_t i, std::size_t j) const { return c_[kSymIndex[i][j]]; }

Mat3 SymTensor2::to_mat() const {
  return Mat3{{c_[0], c_[3], c_[4], c_[3], c_[1], c_[5], c_[4], c_[5], c_[2]}};
}

double SymTensor2::max_abs() const {
  double m = 0.0;
  for (double x : c_) m = std::max(m, std::abs(x));
  return m;
}

SymTensor2 operator+(const SymTensor2& x, const SymTensor2& y) {
  SymTensor2 r = x;
  r += y;
  return r;
}

SymTensor2 operator-(const SymTensor2& x, const SymTensor2& y) { return x + (-1.0) * y; }

SymTensor2 operator*(double s, const SymTensor2& x) {
  SymTensor2 r;
  for (std::size_t k = 0; k < 6; ++k) r.c_[k] = s * x.c_[k];
  return r;
}

SymTensor2& SymTensor2::operator+=(const SymTensor2& o) {
  for (std::size_t k = 0; k < 6; ++k) c_[k] += o.c_[k];
  return *this;
}

// ---------------------------------------------------------------------------
// SkewTensor2

SkewTensor2 SkewTensor2::skew_part(const Mat3& m) {
  return SkewTensor2{{0.5 * (m(0, 1) - m(1, 0)), 0.5 * (m(0, 2) - m(2, 0)),
                      0.5 * (m(1, 2) - m(2, 1))}};
}

SkewTensor2 SkewTensor2::from_matrix(const Mat3& m, double tol) {
  if (!m.is_finite()) throw ValidationError("tensor has non-finite entries");
  const double defect = (m + m.transpose()).max_abs();
  if (defect > tol * std::max(1.0, m.max_abs())) {
    std::ostringstream os;
    os << "tensor is not skew-symmetric: max |A + A^T| = " << defect;
    throw ValidationError(os.str());
  }
  return skew_part(m);
}

double SkewTensor2::operator()(std::size_t i, std::size_t j) const {
  if (i == j) return 0.0;
  const double sign = i < j ? 1.0 : -1.0;
  const std::size_t lo = std::min(i, j), hi = std::max(i, j);
  const std::size_t slot = lo == 0 ? hi - 1 : 2;
  return sign * w_[slot];
}

Mat3 SkewTensor2::to_mat() const {
  return Mat3{{0.0, w_[0], w_[1], -w_[0], 0.0, w_[2], -w_[1], -w_[2], 0.0}};
}

SkewTensor2 operator+(const SkewTensor2& x, const SkewTensor2& y) {
  return SkewTensor2{{x.w_[0] + y.w_[0], x.w_[1] + y.w_[1], x.w_[2] + y.w_[2]}};
}

SkewTensor2 operator*(double s, const SkewTensor2& x) {
  return SkewTensor2{{s * x.w_[0], s * x.w_[1], s * x.w_[2]}};
}

// ---------------------------------------------------------------------------
// free functions

Mat3 outer(const Vec3& u, const Vec3& v) {
  Mat3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) r(i, j) = u[i] * v[j];
  return r;
}

SymTensor2 sym_outer(const Vec3& v) {
  return SymTensor2{{v[0] * v[0], v[1] * v[1], v[2] * v[2], v[0] * v[1], v[0] * v[2], v[1] * v[2]}};
}

SkewTensor2 eps_contract(const Vec3& v) {
  // (0,1) = eps_012 v_2, (0,2) = eps_021 v_1, (1,2) = eps_120 v_0
  return SkewTensor2{{v[2], -v[1], v[0]}};
}

double orthogonality_defect(const Mat3& q) { return max_abs_diff(q * q.transpose(), Mat3::identity()); }

bool is_orthogonal(const Mat3& q, double tol) {
  return q.is_finite() && orthogonality_defect(q) <= tol;
}

Mat3 conjugate(const Mat3& q, const Mat3& a) {
  if (!is_orthogonal(q)) {
    std::ostringstream os;
    os << "conjugate: Q is not orthogonal (max |QQ^T - I| = " << orthogonality_defect(q) << ")";
    throw std::invalid_argument(os.str());
  }
  return q * a * q.transpose();
}

SymTensor2 conjugate(const Mat3& q, const SymTensor2& a) {
  return SymTensor2::symmetric_part(conjugate(q, a.to_mat()));
}

SkewTensor2 conjugate(const Mat3& q, const SkewTensor2& a) {
  return SkewTensor2::skew_part(conjugate(q, a.to_mat()));
}

double trace_of_product(std::span<const Mat3> factors) {
  if (factors.empty()) throw std::invalid_argument("trace_of_product: empty factor list");
  Mat3 p = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) p = p * factors[k];
  return p.trace();
}

double trace_of_product(std::initializer_list<Mat3> factors) {
  return trace_of_product(std::span<const Mat3>(factors.begin(), factors.size()));
}

std::array<double, 6> mandel(const SymTensor2& a) {
  const auto& c = a.components();
  const double r2 = std::sqrt(2.0);
  return {c[0], c[1], c[2], r2 * c[3], r2 * c[4], r2 * c[5]};
}

}  // namespace strucrep
