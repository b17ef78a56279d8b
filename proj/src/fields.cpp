#include "mhdci/fields.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "mhdci/kernels.hpp"

namespace mhdci {

namespace {

using cplx = std::complex<double>;

struct SpectralField {
  int n;
  std::vector<cplx> x, y, z;
};

void fftInPlace(std::vector<cplx>& a, int n, int sign) {
  fftw_plan plan = fftw_plan_dft_3d(n, n, n, reinterpret_cast<fftw_complex*>(a.data()),
                                    reinterpret_cast<fftw_complex*>(a.data()), sign,
                                    FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
}

SpectralField forward(const VecField3& F) {
  SpectralField S;
  S.n = F.n;
  std::size_t m = F.size();
  S.x.resize(m);
  S.y.resize(m);
  S.z.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    S.x[i] = F.x[i];
    S.y[i] = F.y[i];
    S.z[i] = F.z[i];
  }
  fftInPlace(S.x, F.n, FFTW_FORWARD);
  fftInPlace(S.y, F.n, FFTW_FORWARD);
  fftInPlace(S.z, F.n, FFTW_FORWARD);
  return S;
}

VecField3 backward(SpectralField& S) {
  fftInPlace(S.x, S.n, FFTW_BACKWARD);
  fftInPlace(S.y, S.n, FFTW_BACKWARD);
  fftInPlace(S.z, S.n, FFTW_BACKWARD);
  VecField3 F = VecField3::zeros(S.n);
  double inv = 1.0 / double(S.x.size());
  for (std::size_t i = 0; i < S.x.size(); ++i) {
    F.x[i] = S.x[i].real() * inv;
    F.y[i] = S.y[i].real() * inv;
    F.z[i] = S.z[i].real() * inv;
  }
  return F;
}

int waveNumber(int i, int n) { return i <= n / 2 ? i : i - n; }

template <typename Fn>
void forEachMode(int n, Fn fn) {
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k, ++idx)
        fn(idx, waveNumber(i, n), waveNumber(j, n), waveNumber(k, n));
}

}  // namespace

double VecField3::h() const { return 2.0 * M_PI / n; }

VecField3 VecField3::zeros(int n) {
  VecField3 F;
  F.n = n;
  std::size_t m = std::size_t(n) * n * n;
  F.x.assign(m, 0.0);
  F.y.assign(m, 0.0);
  F.z.assign(m, 0.0);
  return F;
}

VecField3 sampleField(int n, const std::function<Vec3(const Vec3&)>& f) {
  VecField3 F = VecField3::zeros(n);
  double h = 2.0 * M_PI / n;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k, ++idx) {
        Vec3 v = f({i * h, j * h, k * h});
        F.x[idx] = v.x;
        F.y[idx] = v.y;
        F.z[idx] = v.z;
      }
  return F;
}

VecField3 curl(const VecField3& F) {
  SpectralField S = forward(F);
  forEachMode(F.n, [&](std::size_t idx, int k1, int k2, int k3) {
    cplx I(0, 1);
    cplx fx = S.x[idx], fy = S.y[idx], fz = S.z[idx];
    S.x[idx] = I * (double(k2) * fz - double(k3) * fy);
    S.y[idx] = I * (double(k3) * fx - double(k1) * fz);
    S.z[idx] = I * (double(k1) * fy - double(k2) * fx);
  });
  return backward(S);
}

VecField3 vectorPotential(const VecField3& B) {
  SpectralField S = forward(B);
  double scale = 0.0;
  for (std::size_t i = 0; i < S.x.size(); ++i)
    scale = std::max({scale, std::abs(S.x[i]), std::abs(S.y[i]), std::abs(S.z[i])});
  forEachMode(B.n, [&](std::size_t idx, int k1, int k2, int k3) {
    double k2n = double(k1) * k1 + double(k2) * k2 + double(k3) * k3;
    if (k2n == 0.0) {
      if (std::abs(S.x[idx]) + std::abs(S.y[idx]) + std::abs(S.z[idx]) >
          1e-10 * (1.0 + scale))
        throw std::runtime_error("vector potential needs a mean-free field");
      S.x[idx] = S.y[idx] = S.z[idx] = 0.0;
      return;
    }
    cplx I(0, 1);
    cplx bx = S.x[idx], by = S.y[idx], bz = S.z[idx];
    // A = i k × B / |k|²
    S.x[idx] = I * (double(k2) * bz - double(k3) * by) / k2n;
    S.y[idx] = I * (double(k3) * bx - double(k1) * bz) / k2n;
    S.z[idx] = I * (double(k1) * by - double(k2) * bx) / k2n;
  });
  return backward(S);
}

double divergenceMax(const VecField3& F) {
  SpectralField S = forward(F);
  double worst = 0.0;
  std::size_t m = S.x.size();
  forEachMode(F.n, [&](std::size_t idx, int k1, int k2, int k3) {
    cplx d = cplx(0, 1) * (double(k1) * S.x[idx] + double(k2) * S.y[idx] +
                           double(k3) * S.z[idx]);
    worst = std::max(worst, std::abs(d) / double(m));
  });
  return worst;
}

double integralDot(const VecField3& a, const VecField3& b) {
  if (a.n != b.n) throw std::invalid_argument("grid size mismatch");
  std::size_t m = a.size();
  double cell = a.h() * a.h() * a.h();
  return cell * (gridDot(a.x.data(), b.x.data(), m) + gridDot(a.y.data(), b.y.data(), m) +
                 gridDot(a.z.data(), b.z.data(), m));
}

double integralSquare(const VecField3& a) {
  std::size_t m = a.size();
  double cell = a.h() * a.h() * a.h();
  return cell * (gridSumSquares(a.x.data(), m) + gridSumSquares(a.y.data(), m) +
                 gridSumSquares(a.z.data(), m));
}

double magneticHelicity(const VecField3& B) {
  VecField3 A = vectorPotential(B);
  return integralDot(A, B);
}

}  // namespace mhdci
