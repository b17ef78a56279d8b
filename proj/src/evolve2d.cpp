#include "mhdci/evolve2d.hpp"

#include <fftw3.h>

#include <cmath>

#include "mhdci/kernels.hpp"

namespace mhdci {

namespace {

using cplx = std::complex<double>;

void fft2(std::vector<cplx>& a, int n, int sign) {
  fftw_plan plan = fftw_plan_dft_2d(n, n, reinterpret_cast<fftw_complex*>(a.data()),
                                    reinterpret_cast<fftw_complex*>(a.data()), sign,
                                    FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
}

int waveNumber(int i, int n) { return i <= n / 2 ? i : i - n; }

std::vector<double> toGrid(std::vector<cplx> a, int n) {
  fft2(a, n, FFTW_BACKWARD);
  std::vector<double> g(a.size());
  double inv = 1.0 / double(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) g[i] = a[i].real() * inv;
  return g;
}

}  // namespace

Sample2D shearedVortexInit(double x, double y) {
  Sample2D s;
  s.psi = std::cos(x) + std::cos(2.0 * y);
  s.omega = std::sin(x) * std::sin(y) + 0.5 * std::cos(2.0 * x);
  return s;
}

Evolve2DSolver::Evolve2DSolver(int n) : n_(n) {
  std::size_t m = std::size_t(n) * n;
  omega_.assign(m, 0.0);
  psi_.assign(m, 0.0);
  dealias_.assign(m, 1.0);
  int cut = n / 3;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j, ++idx)
      if (std::abs(waveNumber(i, n)) > cut || std::abs(waveNumber(j, n)) > cut)
        dealias_[idx] = 0.0;
}

void Evolve2DSolver::setInitial(const std::function<Sample2D(double, double)>& f) {
  double h = 2.0 * M_PI / n_;
  std::size_t idx = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j, ++idx) {
      Sample2D s = f(i * h, j * h);
      psi_[idx] = s.psi;
      omega_[idx] = s.omega;
    }
  fft2(psi_, n_, FFTW_FORWARD);
  fft2(omega_, n_, FFTW_FORWARD);
  for (std::size_t k = 0; k < psi_.size(); ++k) {
    psi_[k] *= dealias_[k];
    omega_[k] *= dealias_[k];
  }
  psi_[0] = 0.0;  // mean-free gauge
  omega_[0] = 0.0;
  time_ = 0.0;
}

Evolve2DSolver::Rhs Evolve2DSolver::rhs(const std::vector<cplx>& om,
                                        const std::vector<cplx>& ps) const {
  std::size_t m = om.size();
  std::vector<cplx> u1(m), u2(m), wx(m), wy(m), b1(m), b2(m), jx(m), jy(m), px(m),
      py(m);
  std::size_t idx = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j, ++idx) {
      double k1 = waveNumber(i, n_), k2 = waveNumber(j, n_);
      double k2n = k1 * k1 + k2 * k2;
      cplx I(0, 1);
      cplx phi = k2n > 0 ? -om[idx] / k2n : cplx(0.0);
      cplx cur = -k2n * ps[idx];
      // ∇⊥ = (−∂y, ∂x)
      u1[idx] = -I * k2 * phi;
      u2[idx] = I * k1 * phi;
      b1[idx] = -I * k2 * ps[idx];
      b2[idx] = I * k1 * ps[idx];
      wx[idx] = I * k1 * om[idx];
      wy[idx] = I * k2 * om[idx];
      jx[idx] = I * k1 * cur;
      jy[idx] = I * k2 * cur;
      px[idx] = I * k1 * ps[idx];
      py[idx] = I * k2 * ps[idx];
    }
  for (auto* f : {&u1, &u2, &wx, &wy, &b1, &b2, &jx, &jy, &px, &py})
    fft2(*f, n_, FFTW_BACKWARD);
  double inv = 1.0 / double(m);
  Rhs out;
  out.omega.resize(m);
  out.psi.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    // inverse transforms are unnormalized, hence inv²
    double s = inv * inv;
    out.omega[k] = -(u1[k].real() * wx[k].real() + u2[k].real() * wy[k].real()) * s +
                   (b1[k].real() * jx[k].real() + b2[k].real() * jy[k].real()) * s;
    out.psi[k] = -(u1[k].real() * px[k].real() + u2[k].real() * py[k].real()) * s;
  }
  fft2(out.omega, n_, FFTW_FORWARD);
  fft2(out.psi, n_, FFTW_FORWARD);
  for (std::size_t k = 0; k < m; ++k) {
    out.omega[k] *= dealias_[k];
    out.psi[k] *= dealias_[k];
  }
  out.omega[0] = 0.0;
  out.psi[0] = 0.0;
  return out;
}

void Evolve2DSolver::step(double dt) {
  std::size_t m = omega_.size();
  auto advance = [&](const Rhs& k, double c) {
    std::vector<cplx> om(m), ps(m);
    for (std::size_t i = 0; i < m; ++i) {
      om[i] = omega_[i] + c * dt * k.omega[i];
      ps[i] = psi_[i] + c * dt * k.psi[i];
    }
    return std::pair{std::move(om), std::move(ps)};
  };
  Rhs k1 = rhs(omega_, psi_);
  auto [om2, ps2] = advance(k1, 0.5);
  Rhs k2 = rhs(om2, ps2);
  auto [om3, ps3] = advance(k2, 0.5);
  Rhs k3 = rhs(om3, ps3);
  auto [om4, ps4] = advance(k3, 1.0);
  Rhs k4 = rhs(om4, ps4);
  for (std::size_t i = 0; i < m; ++i) {
    omega_[i] += dt / 6.0 * (k1.omega[i] + 2.0 * k2.omega[i] + 2.0 * k3.omega[i] +
                             k4.omega[i]);
    psi_[i] += dt / 6.0 * (k1.psi[i] + 2.0 * k2.psi[i] + 2.0 * k3.psi[i] + k4.psi[i]);
  }
  time_ += dt;
}

namespace {

// Parseval: ∫ f g = (2π)² Σ f̂ ḡ̂ / m²  for unnormalized forward transforms
double spectralDot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  double m = double(a.size());
  return s * (2.0 * M_PI) * (2.0 * M_PI) / (m * m);
}

}  // namespace

double Evolve2DSolver::psiL2() const { return spectralDot(psi_, psi_); }

double Evolve2DSolver::magneticEnergy() const {
  double s = 0;
  std::size_t idx = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j, ++idx) {
      double k1 = waveNumber(i, n_), k2 = waveNumber(j, n_);
      s += (k1 * k1 + k2 * k2) * std::norm(psi_[idx]);
    }
  double m = double(psi_.size());
  return s * (2.0 * M_PI) * (2.0 * M_PI) / (m * m);
}

double Evolve2DSolver::kineticEnergy() const {
  double s = 0;
  std::size_t idx = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j, ++idx) {
      double k1 = waveNumber(i, n_), k2 = waveNumber(j, n_);
      double k2n = k1 * k1 + k2 * k2;
      if (k2n > 0) s += std::norm(omega_[idx]) / k2n;
    }
  double m = double(psi_.size());
  return s * (2.0 * M_PI) * (2.0 * M_PI) / (m * m);
}

double Evolve2DSolver::crossHelicity() const {
  // u·B = ∇⊥φ·∇⊥ψ = ∇φ·∇ψ, so sum k² φ̂ ψ̄̂ with φ̂ = −ω̂/k²
  double s = 0;
  std::size_t idx = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j, ++idx) {
      double k1 = waveNumber(i, n_), k2 = waveNumber(j, n_);
      if (k1 == 0 && k2 == 0) continue;
      cplx prod = -omega_[idx] * std::conj(psi_[idx]);
      s += prod.real();
    }
  double m = double(psi_.size());
  return s * (2.0 * M_PI) * (2.0 * M_PI) / (m * m);
}

std::vector<double> Evolve2DSolver::psiGrid() const { return toGrid(psi_, n_); }
std::vector<double> Evolve2DSolver::omegaGrid() const { return toGrid(omega_, n_); }

}  // namespace mhdci
