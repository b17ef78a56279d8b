#pragma once
// The 15-dimensional phase space V = (u,S,B,E), Elsässer variables, the
// constitutive sets K_{r,s} and M, and the bivector calculus on Λ²(R⁴).

#include <optional>
#include <stdexcept>
#include <utility>

#include "mhdci/linalg.hpp"

namespace mhdci {

struct State15 {
  Vec3 u;
  Mat3 S;  // kept exactly symmetric
  Vec3 B;
  Vec3 E;

  State15 operator+(const State15& o) const { return {u + o.u, S + o.S, B + o.B, E + o.E}; }
  State15 operator-(const State15& o) const { return {u - o.u, S - o.S, B - o.B, E - o.E}; }
  State15 operator*(double c) const { return {u * c, S * c, B * c, E * c}; }
  State15 operator-() const { return {-u, -S, -B, -E}; }
};
inline State15 operator*(double c, const State15& v) { return v * c; }
inline double norm(const State15& v) {
  double f = frobenius(v.S);
  return std::sqrt(norm2(v.u) + f * f + norm2(v.B) + norm2(v.E));
}

// S_{u,B} = u⊗u − B⊗B
inline Mat3 stress(const Vec3& u, const Vec3& B) { return outer(u, u) - outer(B, B); }

// Assemble a constitutive state (u, S_{u,B}+ΠI, B, B×u).
inline State15 kState(const Vec3& u, const Vec3& B, double Pi = 0.0) {
  return {u, stress(u, B) + Mat3::identity() * Pi, B, cross(B, u)};
}

struct ElsasserState {
  Vec3 zPlus;
  Vec3 zMinus;
  Mat3 M;  // symmetric part is S; antisymmetric part encodes E, see below
};

// Sign convention: the antisymmetric part A of M acts as A x = −E×x, i.e.
// M = S + crossMatrix(−E). With this choice a constitutive state maps to
// M = z⁺⊗z⁻ + ΠI, matching the Elsässer form of K_{r,s}.
ElsasserState toElsasser(const State15& v);
State15 fromElsasser(const ElsasserState& e);

struct ConstraintParams {
  double r = 2.0;
  double s = 1.0;
  double pressureBound() const { return r * s; }
};

struct Bivector {
  Vec3 b;  // coefficients of dx²∧dx³, dx³∧dx¹, dx¹∧dx²
  Vec3 e;  // coefficients of dx¹∧dx⁴, dx²∧dx⁴, dx³∧dx⁴

  Bivector operator+(const Bivector& o) const { return {b + o.b, e + o.e}; }
  Bivector operator-(const Bivector& o) const { return {b - o.b, e - o.e}; }
  Bivector operator*(double c) const { return {b * c, e * c}; }
  Bivector operator-() const { return {-b, -e}; }
};
inline Bivector operator*(double c, const Bivector& w) { return w * c; }
inline double norm(const Bivector& w) { return std::sqrt(norm2(w.b) + norm2(w.e)); }

inline Bivector maxwellForm(const State15& v) { return {v.B, v.E}; }

Bivector wedge(const Vec4& v, const Vec4& w);
inline double wedgeSquare(const Bivector& w) { return 2.0 * dot(w.b, w.e); }

// ω as the antisymmetric matrix Ω with ω(f,g) = fᵀΩg
Mat4 bivectorMatrix(const Bivector& w);
// evaluation ω(f,g)
double apply(const Bivector& w, const Vec4& f, const Vec4& g);
// comass ‖ω‖ = max_{|f|=|g|=1} ω(f,g) = largest singular value of Ω,
// computed from the exact invariants |b|²+|e|² and b·e.
double comass(const Bivector& w);

// ω∧ξ as a 3-form; components indexed by the omitted axis is overkill here,
// we return the four coefficients (dx¹∧dx²∧dx³, dx¹∧dx²∧dx⁴, dx¹∧dx³∧dx⁴,
// dx²∧dx³∧dx⁴). Zero iff ξ_x·b = 0 and ξ_t b + ξ_x×e = 0.
std::array<double, 4> wedgeVector(const Bivector& w, const Vec4& xi);
double wedgeVectorNorm(const Bivector& w, const Vec4& xi);

struct NotSimple : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Constructive factorization ω = v∧w of a degenerate bivector.
std::pair<Vec4, Vec4> factorize(const Bivector& w, const Tol& tol = {});

// Defect from K_{r,s}: max of the sphere defects, |E−B×u|, and the deviation
// of S from S_{u,B}+ΠI with Π the clamped mean diagonal of S−S_{u,B}.
double distanceToK(const State15& v, const ConstraintParams& p);

inline bool inM(const State15& v, const Tol& tol = {}) {
  return std::abs(dot(v.B, v.E)) <= tol.abs + tol.rel * (1.0 + norm(v.B) * norm(v.E));
}

}  // namespace mhdci
