#include "mhdci/phase_space.hpp"

#include <algorithm>

namespace mhdci {

ElsasserState toElsasser(const State15& v) {
  ElsasserState e;
  e.zPlus = v.u + v.B;
  e.zMinus = v.u - v.B;
  e.M = sym(v.S) + crossMatrix(-v.E);
  return e;
}

State15 fromElsasser(const ElsasserState& e) {
  State15 v;
  v.u = (e.zPlus + e.zMinus) * 0.5;
  v.B = (e.zPlus - e.zMinus) * 0.5;
  v.S = sym(e.M);
  Mat3 A = (e.M - e.M.transpose()) * 0.5;
  v.E = -axial(A);
  return v;
}

Bivector wedge(const Vec4& v, const Vec4& w) {
  Bivector out;
  out.b = cross(v.spatial(), w.spatial());
  out.e = v.spatial() * w.t - w.spatial() * v.t;
  return out;
}

Mat4 bivectorMatrix(const Bivector& w) {
  Mat4 m;
  // spatial block: ω(e_i,e_j) with ω = b₁dx²∧dx³ + b₂dx³∧dx¹ + b₃dx¹∧dx²
  m(1, 2) = w.b.x; m(2, 1) = -w.b.x;
  m(2, 0) = w.b.y; m(0, 2) = -w.b.y;
  m(0, 1) = w.b.z; m(1, 0) = -w.b.z;
  m(0, 3) = w.e.x; m(3, 0) = -w.e.x;
  m(1, 3) = w.e.y; m(3, 1) = -w.e.y;
  m(2, 3) = w.e.z; m(3, 2) = -w.e.z;
  return m;
}

double apply(const Bivector& w, const Vec4& f, const Vec4& g) {
  return dot(f, bivectorMatrix(w) * g);
}

double comass(const Bivector& w) {
  // singular values σ₁ ≥ σ₂ of the antisymmetric matrix satisfy
  // σ₁²+σ₂² = |b|²+|e|² and σ₁σ₂ = |b·e|
  double q = norm2(w.b) + norm2(w.e);
  double p = std::abs(dot(w.b, w.e));
  double disc = std::max(0.0, q * q - 4.0 * p * p);
  return std::sqrt(0.5 * (q + std::sqrt(disc)));
}

std::array<double, 4> wedgeVector(const Bivector& w, const Vec4& xi) {
  Vec3 xs = xi.spatial();
  double c123 = dot(w.b, xs);
  Vec3 c4 = w.b * xi.t + cross(xs, w.e);  // coefficients with a dx⁴ factor
  // dx¹∧dx²∧dx⁴ carries b₃ξ_t + (ξ×e)₃, etc.
  return {c123, c4.z, -c4.y, c4.x};
}

double wedgeVectorNorm(const Bivector& w, const Vec4& xi) {
  auto c = wedgeVector(w, xi);
  return std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2] + c[3] * c[3]);
}

std::pair<Vec4, Vec4> factorize(const Bivector& w, const Tol& tol) {
  double n = norm(w);
  if (n == 0.0) return {Vec4{}, Vec4{}};  // 0 = 0∧0
  if (std::abs(wedgeSquare(w)) > tol.abs + tol.rel * n * n)
    throw NotSimple("bivector is not degenerate: omega^wedge omega != 0");
  // the electric branch keeps deliberately tiny e-components (they carry the
  // plane tilt of repaired segments), so the magnetic shortcut only takes
  // over when e is at rounding level
  if (norm(w.e) <= tol.abs + 1e-14 * n) {
    // purely magnetic: pick v_x × w_x = b
    Vec3 vx = anyOrthogonal(w.b);
    Vec3 wx = cross(w.b, vx);  // vx × wx = vx × (b × vx) = b (|vx|=1, vx⊥b)
    return {extend(vx), extend(wx)};
  }
  // project out any b·e residue so the output is an exact factorization of
  // the nearest simple bivector with this e (backward error |b·e|/|e|)
  Vec3 bt = w.b - w.e * (dot(w.b, w.e) / norm2(w.e));
  Vec4 v = extend(w.e);
  Vec4 u = extend(cross(bt, w.e) / norm2(w.e), 1.0);
  return {v, u};
}

double distanceToK(const State15& v, const ConstraintParams& p) {
  double d = std::abs(norm(v.u + v.B) - p.r);
  d = std::max(d, std::abs(norm(v.u - v.B) - p.s));
  d = std::max(d, norm(v.E - cross(v.B, v.u)));
  Mat3 dev = sym(v.S) - stress(v.u, v.B);
  double Pi = std::clamp(dev.trace() / 3.0, -p.pressureBound(), p.pressureBound());
  d = std::max(d, frobenius(dev - Mat3::identity() * Pi));
  return d;
}

}  // namespace mhdci
