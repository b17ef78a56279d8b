#pragma once
// Pseudospectral solver for incompressible 2-d MHD on the 2π-torus in
// vorticity / flux-function form:
//   ∂t ω + u·∇ω = B·∇j,   ∂t ψ + u·∇ψ = 0,
//   u = ∇⊥φ, Δφ = ω,  B = ∇⊥ψ,  j = Δψ.
// Classical RK4 in time, 2/3-rule dealiasing in space. The flux function is
// transported, so ∫ψ² is conserved up to the integrator error; with mean-free
// ψ the Poincaré inequality gives ∫|B|² = ∫|∇ψ|² ≥ ∫ψ².

#include <complex>
#include <functional>
#include <vector>

namespace mhdci {

struct Sample2D {
  double psi = 0;
  double omega = 0;
};

// smooth few-mode initial data with mean-free ψ and ω
Sample2D shearedVortexInit(double x, double y);

class Evolve2DSolver {
 public:
  explicit Evolve2DSolver(int n);

  void setInitial(const std::function<Sample2D(double, double)>& f);
  void step(double dt);

  int n() const { return n_; }
  double time() const { return time_; }
  double psiL2() const;           // ∫ ψ²
  double magneticEnergy() const;  // ∫ |∇ψ|²
  double kineticEnergy() const;   // ∫ |∇φ|²
  double crossHelicity() const;   // ∫ u·B

  std::vector<double> psiGrid() const;
  std::vector<double> omegaGrid() const;

 private:
  using cplx = std::complex<double>;
  struct Rhs {
    std::vector<cplx> omega, psi;
  };
  Rhs rhs(const std::vector<cplx>& om, const std::vector<cplx>& ps) const;

  int n_;
  double time_ = 0;
  std::vector<cplx> omega_, psi_;  // spectral coefficients
  std::vector<double> dealias_;
};

}  // namespace mhdci
