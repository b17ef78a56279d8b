#pragma once
// Small fixed-size linear algebra used throughout: R^3 and R^4 vectors,
// 3x3 and 4x4 matrices, a Jacobi eigensolver for symmetric matrices and
// tiny least-squares/nullspace helpers. No external dependencies.

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace mhdci {

inline constexpr double kTolAbs = 1e-12;
inline constexpr double kTolRel = 1e-9;

struct Tol {
  double abs = kTolAbs;
  double rel = kTolRel;
  // scale-aware test: |x| <= abs + rel*scale
  bool ok(double x, double scale = 0.0) const {
    return std::abs(x) <= abs + rel * std::abs(scale);
  }
};

struct Vec3 {
  double x = 0, y = 0, z = 0;

  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3 operator*(double c) const { return {x * c, y * c, z * c}; }
  Vec3 operator/(double c) const { return {x / c, y / c, z / c}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
};
inline Vec3 operator*(double c, const Vec3& v) { return v * c; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline double norm2(const Vec3& v) { return dot(v, v); }
inline Vec3 normalized(const Vec3& v) { double n = norm(v); return n > 0 ? v / n : Vec3{}; }

// Deterministic unit vector orthogonal to v (v != 0): cross with the least
// aligned coordinate axis.
Vec3 anyOrthogonal(const Vec3& v);

struct Vec4 {
  double x = 0, y = 0, z = 0, t = 0;

  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : (i == 2 ? z : t)); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : (i == 2 ? z : t)); }

  Vec4 operator+(const Vec4& o) const { return {x + o.x, y + o.y, z + o.z, t + o.t}; }
  Vec4 operator-(const Vec4& o) const { return {x - o.x, y - o.y, z - o.z, t - o.t}; }
  Vec4 operator-() const { return {-x, -y, -z, -t}; }
  Vec4 operator*(double c) const { return {x * c, y * c, z * c, t * c}; }
  Vec4 operator/(double c) const { return {x / c, y / c, z / c, t / c}; }
  Vec4& operator+=(const Vec4& o) { x += o.x; y += o.y; z += o.z; t += o.t; return *this; }

  Vec3 spatial() const { return {x, y, z}; }
};
inline Vec4 operator*(double c, const Vec4& v) { return v * c; }
inline double dot(const Vec4& a, const Vec4& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z + a.t * b.t;
}
inline double norm(const Vec4& v) { return std::sqrt(dot(v, v)); }
inline Vec4 normalized(const Vec4& v) { double n = norm(v); return n > 0 ? v / n : Vec4{}; }
inline Vec4 extend(const Vec3& v, double t = 0.0) { return {v.x, v.y, v.z, t}; }

struct Mat3 {
  // row-major
  std::array<double, 9> a{};

  double& operator()(int i, int j) { return a[3 * i + j]; }
  double operator()(int i, int j) const { return a[3 * i + j]; }

  static Mat3 zero() { return {}; }
  static Mat3 identity() {
    Mat3 m; m(0, 0) = m(1, 1) = m(2, 2) = 1.0; return m;
  }
  static Mat3 diag(double d0, double d1, double d2) {
    Mat3 m; m(0, 0) = d0; m(1, 1) = d1; m(2, 2) = d2; return m;
  }

  Mat3 operator+(const Mat3& o) const { Mat3 r; for (int i = 0; i < 9; ++i) r.a[i] = a[i] + o.a[i]; return r; }
  Mat3 operator-(const Mat3& o) const { Mat3 r; for (int i = 0; i < 9; ++i) r.a[i] = a[i] - o.a[i]; return r; }
  Mat3 operator-() const { Mat3 r; for (int i = 0; i < 9; ++i) r.a[i] = -a[i]; return r; }
  Mat3 operator*(double c) const { Mat3 r; for (int i = 0; i < 9; ++i) r.a[i] = a[i] * c; return r; }
  Mat3& operator+=(const Mat3& o) { for (int i = 0; i < 9; ++i) a[i] += o.a[i]; return *this; }

  Vec3 operator*(const Vec3& v) const {
    return {a[0] * v.x + a[1] * v.y + a[2] * v.z,
            a[3] * v.x + a[4] * v.y + a[5] * v.z,
            a[6] * v.x + a[7] * v.y + a[8] * v.z};
  }
  Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0;
        for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
        r(i, j) = s;
      }
    return r;
  }
  Mat3 transpose() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
    return r;
  }
  double trace() const { return a[0] + a[4] + a[8]; }
};
inline Mat3 operator*(double c, const Mat3& m) { return m * c; }
inline Mat3 outer(const Vec3& u, const Vec3& v) {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = u[i] * v[j];
  return m;
}
inline Mat3 sym(const Mat3& m) { return (m + m.transpose()) * 0.5; }
inline Mat3 symOuter(const Vec3& u, const Vec3& v) {  // u⊗v + v⊗u
  return outer(u, v) + outer(v, u);
}
inline double frobenius(const Mat3& m) {
  double s = 0; for (double c : m.a) s += c * c; return std::sqrt(s);
}
// antisymmetric matrix A with A x = w × x
inline Mat3 crossMatrix(const Vec3& w) {
  Mat3 m;
  m(0, 1) = -w.z; m(0, 2) = w.y;
  m(1, 0) = w.z;  m(1, 2) = -w.x;
  m(2, 0) = -w.y; m(2, 1) = w.x;
  return m;
}
// inverse of crossMatrix: w with A x = w × x for antisymmetric A
inline Vec3 axial(const Mat3& A) { return {A(2, 1), A(0, 2), A(1, 0)}; }

struct EigenSym3 {
  std::array<double, 3> values{};   // ascending
  std::array<Vec3, 3> vectors{};    // orthonormal
};
// Jacobi rotations; input must be symmetric.
EigenSym3 eigenSym3(const Mat3& s);

double operatorNorm(const Mat3& m);  // largest singular value

struct Mat4 {
  std::array<double, 16> a{};
  double& operator()(int i, int j) { return a[4 * i + j]; }
  double operator()(int i, int j) const { return a[4 * i + j]; }
  static Mat4 zero() { return {}; }
  Mat4 operator+(const Mat4& o) const { Mat4 r; for (int i = 0; i < 16; ++i) r.a[i] = a[i] + o.a[i]; return r; }
  Mat4 operator-(const Mat4& o) const { Mat4 r; for (int i = 0; i < 16; ++i) r.a[i] = a[i] - o.a[i]; return r; }
  Mat4 operator*(double c) const { Mat4 r; for (int i = 0; i < 16; ++i) r.a[i] = a[i] * c; return r; }
  Mat4& operator+=(const Mat4& o) { for (int i = 0; i < 16; ++i) a[i] += o.a[i]; return *this; }
  Vec4 operator*(const Vec4& v) const {
    Vec4 r;
    for (int i = 0; i < 4; ++i) {
      double s = 0;
      for (int j = 0; j < 4; ++j) s += (*this)(i, j) * v[j];
      r[i] = s;
    }
    return r;
  }
  Mat4 operator*(const Mat4& o) const {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double s = 0;
        for (int k = 0; k < 4; ++k) s += (*this)(i, k) * o(k, j);
        r(i, j) = s;
      }
    return r;
  }
  Mat4 transpose() const {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) r(i, j) = (*this)(j, i);
    return r;
  }
};
inline Mat4 outer4(const Vec4& u, const Vec4& v) {
  Mat4 m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = u[i] * v[j];
  return m;
}
inline double frobenius(const Mat4& m) {
  double s = 0; for (double c : m.a) s += c * c; return std::sqrt(s);
}

// Least squares min |A c - b| for a dense column-major-free small system.
// rows x cols with cols <= rows, via normal equations + Jacobi (cols <= 4).
// Returns solution; writes residual norm if requested.
std::vector<double> leastSquares(const std::vector<std::vector<double>>& A,
                                 const std::vector<double>& b,
                                 double* residual = nullptr);

// Orthonormal basis of the (approximate) nullspace of a rows x cols matrix
// (cols <= 4): right singular vectors whose singular value is <= tol * smax.
std::vector<std::vector<double>> nullspace(const std::vector<std::vector<double>>& A,
                                           int cols, double tol = 1e-9);

}  // namespace mhdci
