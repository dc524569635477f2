#ifndef SHF_VEC3_HPP
#define SHF_VEC3_HPP

#include <array>
#include <cmath>

namespace shf {

/// 3-vector in the optical frame (D1, D2, b). Components are ångström for
/// positions and tesla for fields; the unit is set by context.
struct Vec3 {
  double d1 = 0.0;
  double d2 = 0.0;
  double b = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double d1_, double d2_, double b_) : d1(d1_), d2(d2_), b(b_) {}

  constexpr Vec3 operator+(const Vec3& o) const { return {d1 + o.d1, d2 + o.d2, b + o.b}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {d1 - o.d1, d2 - o.d2, b - o.b}; }
  constexpr Vec3 operator-() const { return {-d1, -d2, -b}; }
  constexpr Vec3 operator*(double s) const { return {d1 * s, d2 * s, b * s}; }
  constexpr Vec3 operator/(double s) const { return {d1 / s, d2 / s, b / s}; }

  constexpr double dot(const Vec3& o) const { return d1 * o.d1 + d2 * o.d2 + b * o.b; }
  constexpr Vec3 cross(const Vec3& o) const {
    return {d2 * o.b - b * o.d2, b * o.d1 - d1 * o.b, d1 * o.d2 - d2 * o.d1};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  constexpr double norm2() const { return dot(*this); }
  Vec3 normalized() const { return *this / norm(); }

  bool finite() const {
    return std::isfinite(d1) && std::isfinite(d2) && std::isfinite(b);
  }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// 3x3 real matrix, row-major, in the (D1, D2, b) frame.
struct Mat3 {
  std::array<double, 9> a{};  // a[3*i + j]

  constexpr double& operator()(int i, int j) { return a[3 * i + j]; }
  constexpr double operator()(int i, int j) const { return a[3 * i + j]; }

  static constexpr Mat3 identity() {
    Mat3 m;
    m.a = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    return m;
  }

  constexpr Mat3 transpose() const {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = (*this)(j, i);
    return m;
  }

  constexpr Vec3 mul(const Vec3& v) const {
    return {a[0] * v.d1 + a[1] * v.d2 + a[2] * v.b,
            a[3] * v.d1 + a[4] * v.d2 + a[5] * v.b,
            a[6] * v.d1 + a[7] * v.d2 + a[8] * v.b};
  }

  /// transpose(this) * v without forming the transpose.
  constexpr Vec3 tmul(const Vec3& v) const {
    return {a[0] * v.d1 + a[3] * v.d2 + a[6] * v.b,
            a[1] * v.d1 + a[4] * v.d2 + a[7] * v.b,
            a[2] * v.d1 + a[5] * v.d2 + a[8] * v.b};
  }

  constexpr Mat3 mul(const Mat3& o) const {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
        m(i, j) = s;
      }
    return m;
  }

  bool finite() const {
    for (double x : a)
      if (!std::isfinite(x)) return false;
    return true;
  }
};

/// Eigenvalues of a symmetric 3x3 matrix (ascending), cyclic Jacobi sweeps.
std::array<double, 3> symmetric_eigenvalues(const Mat3& m);

/// Singular values of an arbitrary 3x3 matrix (ascending).
std::array<double, 3> singular_values(const Mat3& m);

}  // namespace shf

#endif
