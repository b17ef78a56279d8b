#pragma once
// Quadratic constant-coefficient potential operator for the fluid variables:
// given a symmetric space-time flux U with U₄₄ = 0 and Uξ = 0, builds P_U
// with P_U[φ] divergence-free row-wise for every smooth φ and
// P_U[h((x,t)·ξ)] = h''((x,t)·ξ) U.

#include <utility>
#include <vector>

#include "mhdci/wave_cone.hpp"

namespace mhdci {

struct NotInKernel : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// [[S, u], [uᵀ, 0]]
Mat4 spaceTimeFlux(const Vec3& u, const Mat3& S);
void splitFlux(const Mat4& U, Vec3& u, Mat3& S);

class FluidPotential {
 public:
  FluidPotential(const Mat4& U, const WaveVector& xi, const Tol& tol = {});

  // P_U[φ] at a point, from the space-time Hessian of φ
  Mat4 apply(const Mat4& hessPhi) const;

  const Mat4& target() const { return U_; }
  const WaveVector& xi() const { return xi_; }
  // U = Σ ½(a⊗b + b⊗a) with a ⊥ ξ, a ⊥ e₄ and b ⊥ ξ
  const std::vector<std::pair<Vec4, Vec4>>& pairs() const { return pairs_; }

 private:
  Mat4 U_;
  WaveVector xi_;
  std::vector<std::pair<Vec4, Vec4>> pairs_;
  std::vector<Mat4> R_, Q_;  // per pair, including the normalization
};

}  // namespace mhdci
