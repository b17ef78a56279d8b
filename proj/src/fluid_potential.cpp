#include "mhdci/fluid_potential.hpp"

#include <cmath>

namespace mhdci {

Mat4 spaceTimeFlux(const Vec3& u, const Mat3& S) {
  Mat4 U = Mat4::zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) U(i, j) = S(i, j);
  for (int i = 0; i < 3; ++i) {
    U(i, 3) = u[i];
    U(3, i) = u[i];
  }
  return U;
}

void splitFlux(const Mat4& U, Vec3& u, Mat3& S) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) S(i, j) = U(i, j);
  u = {U(0, 3), U(1, 3), U(2, 3)};
}

FluidPotential::FluidPotential(const Mat4& U, const WaveVector& xi, const Tol& tol)
    : U_(U), xi_(xi) {
  double scale = 1.0 + frobenius(U);
  if (frobenius(U - U.transpose()) > tol.abs + tol.rel * scale)
    throw NotInKernel("flux matrix is not symmetric");
  if (std::abs(U(3, 3)) > tol.abs + tol.rel * scale)
    throw NotInKernel("flux matrix has a density component");
  Vec4 xi4 = xi.vec();
  double nxi = norm(xi4), nxix = norm(xi.xiX);
  if (nxix <= 0) throw NotInKernel("wave vector has no spatial part");
  Vec4 r = U * xi4;
  if (norm(r) > tol.abs + tol.rel * scale * nxi)
    throw NotInKernel("wave vector is not in the kernel of the flux");

  // orthonormal basis {p, q, m} of ξ^⊥ with p, q purely spatial; m has a
  // nonzero time component whenever ξ_t may differ from zero
  Vec3 xh = xi.xiX / nxix;
  Vec4 p = extend(anyOrthogonal(xi.xiX), 0.0);
  Vec4 q = extend(cross(xh, p.spatial()), 0.0);
  Vec4 xu = xi4 / nxi;
  Vec4 m = Vec4{0, 0, 0, 1} - xu * xu.t;
  m = m / norm(m);

  double cpp = dot(p, U * p), cqq = dot(q, U * q), cmm = dot(m, U * m);
  double cpq = dot(p, U * q), cpm = dot(p, U * m), cqm = dot(q, U * m);
  // U₄₄ = 0 and Uξ = 0 force the m⊗m coefficient to vanish
  if (std::abs(cmm) > 1e-7 * scale)
    throw NotInKernel("flux has a residual component outside the pair span");

  pairs_.clear();
  if (std::abs(cpp) + std::abs(cpq) + std::abs(cpm) > 0)
    pairs_.push_back({p, p * cpp + q * (2 * cpq) + m * (2 * cpm)});
  if (std::abs(cqq) + std::abs(cqm) > 0)
    pairs_.push_back({q, q * cqq + m * (2 * cqm)});

  Vec4 xs = extend(xi.xiX, 0.0);  // time-truncated ξ keeps the rows of R clean
  double inv = 1.0 / (norm2(xi.xiX) * nxi * nxi);
  for (const auto& [a, b] : pairs_) {
    R_.push_back((outer4(a, xs) - outer4(xs, a)) * inv);
    Q_.push_back(outer4(b, xi4) - outer4(xi4, b));
  }
}

Mat4 FluidPotential::apply(const Mat4& hessPhi) const {
  Mat4 out = Mat4::zero();
  for (size_t i = 0; i < R_.size(); ++i) {
    Mat4 rhq = R_[i] * hessPhi * Q_[i].transpose();
    out += (rhq + rhq.transpose()) * 0.5;
  }
  return out;
}

}  // namespace mhdci
