#pragma once

// Fixed-shape 3x3 tensor algebra: vectors, general matrices, and symmetric /
// skew-symmetric second-order tensors that store only their independent
// entries.

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>

namespace strucrep {

/// Orthogonality tolerance on max |Q Q^T - I|.
inline constexpr double kOrthTol = 1e-9;
/// Symmetry tolerance applied when ingesting tensors from files.
inline constexpr double kSymTol = 1e-12;

struct Vec3 {
  std::array<double, 3> v{0.0, 0.0, 0.0};

  constexpr Vec3() = default;
  constexpr Vec3(double x, double y, double z) : v{x, y, z} {}

  constexpr double operator[](std::size_t i) const { return v[i]; }
  constexpr double& operator[](std::size_t i) { return v[i]; }

  friend constexpr Vec3 operator+(const Vec3& a, const Vec3& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
  }
  friend constexpr Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
  }
  friend constexpr Vec3 operator*(double s, const Vec3& a) {
    return {s * a[0], s * a[1], s * a[2]};
  }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

inline constexpr Vec3 kUnitI{1.0, 0.0, 0.0};
inline constexpr Vec3 kUnitJ{0.0, 1.0, 0.0};
inline constexpr Vec3 kUnitK{0.0, 0.0, 1.0};

/// General 3x3 matrix, row-major.
struct Mat3 {
  std::array<double, 9> a{};

  constexpr Mat3() = default;
  /// Row-major initializer, e.g. Mat3{{1,0,0, 0,1,0, 0,0,1}}.
  constexpr explicit Mat3(const std::array<double, 9>& entries) : a(entries) {}

  static constexpr Mat3 zero() { return Mat3{}; }
  static constexpr Mat3 identity() {
    return Mat3{{1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0}};
  }
  static constexpr Mat3 diag(double d0, double d1, double d2) {
    return Mat3{{d0, 0.0, 0.0, 0.0, d1, 0.0, 0.0, 0.0, d2}};
  }

  constexpr double operator()(std::size_t i, std::size_t j) const { return a[3 * i + j]; }
  constexpr double& operator()(std::size_t i, std::size_t j) { return a[3 * i + j]; }

  constexpr Mat3 transpose() const {
    Mat3 t;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) t(i, j) = (*this)(j, i);
    return t;
  }
  constexpr double trace() const { return a[0] + a[4] + a[8]; }
  double max_abs() const;
  bool is_finite() const;

  friend constexpr Mat3 operator+(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (std::size_t k = 0; k < 9; ++k) r.a[k] = x.a[k] + y.a[k];
    return r;
  }
  friend constexpr Mat3 operator-(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (std::size_t k = 0; k < 9; ++k) r.a[k] = x.a[k] - y.a[k];
    return r;
  }
  friend constexpr Mat3 operator-(const Mat3& x) {
    Mat3 r;
    for (std::size_t k = 0; k < 9; ++k) r.a[k] = -x.a[k];
    return r;
  }
  friend constexpr Mat3 operator*(double s, const Mat3& x) {
    Mat3 r;
    for (std::size_t k = 0; k < 9; ++k) r.a[k] = s * x.a[k];
    return r;
  }
  friend constexpr Mat3 operator*(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < 3; ++k) s += x(i, k) * y(k, j);
        r(i, j) = s;
      }
    return r;
  }
  friend constexpr Vec3 operator*(const Mat3& m, const Vec3& v) {
    return {m(0, 0) * v[0] + m(0, 1) * v[1] + m(0, 2) * v[2],
            m(1, 0) * v[0] + m(1, 1) * v[1] + m(1, 2) * v[2],
            m(2, 0) * v[0] + m(2, 1) * v[1] + m(2, 2) * v[2]};
  }
  Mat3& operator+=(const Mat3& o) {
    for (std::size_t k = 0; k < 9; ++k) a[k] += o.a[k];
    return *this;
  }
  friend constexpr bool operator==(const Mat3&, const Mat3&) = default;
};

/// max_ij |A_ij - B_ij|
double max_abs_diff(const Mat3& x, const Mat3& y);

/// Symmetric tensor. Storage order (00, 11, 22, 01, 02, 12), i.e. the
/// C11,C22,C33,C12,C13,C23 component order used by the CSV format.
class SymTensor2 {
 public:
  constexpr SymTensor2() = default;
  constexpr explicit SymTensor2(const std::array<double, 6>& c) : c_(c) {}

  static constexpr SymTensor2 identity() { return SymTensor2{{1.0, 1.0, 1.0, 0.0, 0.0, 0.0}}; }
  static constexpr SymTensor2 diag(double d0, double d1, double d2) {
    return SymTensor2{{d0, d1, d2, 0.0, 0.0, 0.0}};
  }
  /// (A + A^T) / 2 without any check.
  static SymTensor2 symmetric_part(const Mat3& m);
  /// Throws ValidationError when max|A - A^T| exceeds tol * max(1, max|A|).
  static SymTensor2 from_matrix(const Mat3& m, double tol = kSymTol);

  double operator()(std::size_t i, std::size_t j) const;
  const std::array<double, 6>& components() const { return c_; }
  Mat3 to_mat() const;
  double trace() const { return c_[0] + c_[1] + c_[2]; }
  double max_abs() const;

  friend SymTensor2 operator+(const SymTensor2& x, const SymTensor2& y);
  friend SymTensor2 operator-(const SymTensor2& x, const SymTensor2& y);
  friend SymTensor2 operator*(double s, const SymTensor2& x);
  SymTensor2& operator+=(const SymTensor2& o);
  friend bool operator==(const SymTensor2&, const SymTensor2&) = default;

 private:
  std::array<double, 6> c_{};
};

/// Skew tensor. Storage order (01, 02, 12); the diagonal is zero.
class SkewTensor2 {
 public:
  constexpr SkewTensor2() = default;
  constexpr explicit SkewTensor2(const std::array<double, 3>& w) : w_(w) {}

  static SkewTensor2 skew_part(const Mat3& m);
  /// Throws ValidationError when max|A + A^T| exceeds tol * max(1, max|A|).
  static SkewTensor2 from_matrix(const Mat3& m, double tol = kSymTol);

  double operator()(std::size_t i, std::size_t j) const;
  const std::array<double, 3>& components() const { return w_; }
  Mat3 to_mat() const;

  friend SkewTensor2 operator+(const SkewTensor2& x, const SkewTensor2& y);
  friend SkewTensor2 operator*(double s, const SkewTensor2& x);
  friend bool operator==(const SkewTensor2&, const SkewTensor2&) = default;

 private:
  std::array<double, 3> w_{};
};

Mat3 outer(const Vec3& u, const Vec3& v);
/// v (x) v as a symmetric tensor.
SymTensor2 sym_outer(const Vec3& v);

/// result(i,j) = sum_k eps(i,j,k) v(k). eps_contract(k) = [[0,1,0],[-1,0,0],[0,0,0]].
SkewTensor2 eps_contract(const Vec3& v);

/// max |Q Q^T - I|
double orthogonality_defect(const Mat3& q);
bool is_orthogonal(const Mat3& q, double tol = kOrthTol);

/// Q A Q^T. Throws std::invalid_argument when Q is not orthogonal within kOrthTol.
Mat3 conjugate(const Mat3& q, const Mat3& a);
SymTensor2 conjugate(const Mat3& q, const SymTensor2& a);
SkewTensor2 conjugate(const Mat3& q, const SkewTensor2& a);

/// Trace of the left-to-right product. Throws std::invalid_argument on an empty list.
double trace_of_product(std::span<const Mat3> factors);
double trace_of_product(std::initializer_list<Mat3> factors);

/// 6-vector with sqrt(2)-weighted off-diagonals, so that the Euclidean norm
/// equals the Frobenius norm of the full tensor.
std::array<double, 6> mandel(const SymTensor2& a);

}  // namespace strucrep
