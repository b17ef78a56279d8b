#include "mhdci/linalg.hpp"

#include <algorithm>
#include <cassert>

namespace mhdci {

Vec3 anyOrthogonal(const Vec3& v) {
  double ax = std::abs(v.x), ay = std::abs(v.y), az = std::abs(v.z);
  Vec3 axis;
  if (ax <= ay && ax <= az) axis = {1, 0, 0};
  else if (ay <= az) axis = {0, 1, 0};
  else axis = {0, 0, 1};
  return normalized(cross(v, axis));
}

namespace {

// Jacobi eigen decomposition for symmetric n x n, n <= 4.
// a is overwritten; v receives eigenvectors in columns.
template <int N>
void jacobi(std::array<std::array<double, N>, N>& a,
            std::array<std::array<double, N>, N>& v) {
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) v[i][j] = (i == j) ? 1.0 : 0.0;
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0;
    for (int p = 0; p < N; ++p)
      for (int q = p + 1; q < N; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (int p = 0; p < N; ++p)
      for (int q = p + 1; q < N; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < N; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < N; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < N; ++k) {
          double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
  }
}

}  // namespace

EigenSym3 eigenSym3(const Mat3& s) {
  std::array<std::array<double, 3>, 3> a, v;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[i][j] = 0.5 * (s(i, j) + s(j, i));
  jacobi<3>(a, v);
  std::array<int, 3> idx = {0, 1, 2};
  std::sort(idx.begin(), idx.end(), [&](int p, int q) { return a[p][p] < a[q][q]; });
  EigenSym3 out;
  for (int k = 0; k < 3; ++k) {
    out.values[k] = a[idx[k]][idx[k]];
    out.vectors[k] = {v[0][idx[k]], v[1][idx[k]], v[2][idx[k]]};
  }
  return out;
}

double operatorNorm(const Mat3& m) {
  Mat3 mtm = m.transpose() * m;
  auto e = eigenSym3(mtm);
  return std::sqrt(std::max(0.0, e.values[2]));
}

std::vector<double> leastSquares(const std::vector<std::vector<double>>& A,
                                 const std::vector<double>& b,
                                 double* residual) {
  size_t rows = A.size();
  size_t cols = rows ? A[0].size() : 0;
  assert(b.size() == rows && cols <= 6);
  // Householder QR: normal equations would square the conditioning, which
  // matters when the columns are nearly dependent
  std::vector<std::vector<double>> R = A;
  std::vector<double> y = b;
  double colmax = 0;
  for (size_t j = 0; j < cols; ++j) {
    double s = 0;
    for (size_t r = 0; r < rows; ++r) s += R[r][j] * R[r][j];
    colmax = std::max(colmax, std::sqrt(s));
  }
  for (size_t p = 0; p < cols && p < rows; ++p) {
    double s = 0;
    for (size_t r = p; r < rows; ++r) s += R[r][p] * R[r][p];
    double alpha = std::sqrt(s);
    if (alpha == 0.0) continue;
    if (R[p][p] > 0) alpha = -alpha;
    std::vector<double> v(rows - p);
    v[0] = R[p][p] - alpha;
    for (size_t r = p + 1; r < rows; ++r) v[r - p] = R[r][p];
    double vn2 = 0;
    for (double t : v) vn2 += t * t;
    if (vn2 == 0.0) continue;
    for (size_t j = p; j < cols; ++j) {
      double proj = 0;
      for (size_t r = p; r < rows; ++r) proj += v[r - p] * R[r][j];
      proj *= 2.0 / vn2;
      for (size_t r = p; r < rows; ++r) R[r][j] -= proj * v[r - p];
    }
    double proj = 0;
    for (size_t r = p; r < rows; ++r) proj += v[r - p] * y[r];
    proj *= 2.0 / vn2;
    for (size_t r = p; r < rows; ++r) y[r] -= proj * v[r - p];
  }
  std::vector<double> x(cols, 0.0);
  for (int p = int(std::min(cols, rows)) - 1; p >= 0; --p) {
    double s = y[p];
    for (size_t cidx = p + 1; cidx < cols; ++cidx) s -= R[p][cidx] * x[cidx];
    // drop directions lost to rank deficiency; the caller checks the residual
    x[p] = std::abs(R[p][p]) > 1e-13 * (colmax > 0 ? colmax : 1.0) ? s / R[p][p] : 0.0;
  }
  if (residual) {
    double r2 = 0;
    for (size_t r = 0; r < rows; ++r) {
      double s = -b[r];
      for (size_t cidx = 0; cidx < cols; ++cidx) s += A[r][cidx] * x[cidx];
      r2 += s * s;
    }
    *residual = std::sqrt(r2);
  }
  return x;
}

std::vector<std::vector<double>> nullspace(const std::vector<std::vector<double>>& A,
                                           int cols, double tol) {
  assert(cols <= 4);
  // eigen decomposition of AᵀA; nullspace = eigenvectors with tiny eigenvalue
  std::array<std::array<double, 4>, 4> G{}, V{};
  for (int i = 0; i < cols; ++i)
    for (int j = 0; j < cols; ++j) {
      double s = 0;
      for (const auto& row : A) s += row[i] * row[j];
      G[i][j] = s;
    }
  jacobi<4>(G, V);
  double emax = 0;
  for (int i = 0; i < cols; ++i) emax = std::max(emax, std::abs(G[i][i]));
  std::vector<std::vector<double>> out;
  for (int i = 0; i < cols; ++i) {
    if (std::abs(G[i][i]) <= tol * tol * (emax > 0 ? emax : 1.0) + 1e-28) {
      std::vector<double> v(cols);
      for (int k = 0; k < cols; ++k) v[k] = V[k][i];
      out.push_back(std::move(v));
    }
  }
  return out;
}

}  // namespace mhdci
