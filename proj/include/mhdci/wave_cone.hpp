#pragma once
// Wave-cone membership, certificate construction, and good/bad classification
// of Λ-segments, plus the two auxiliary constructive lemmas (tube realignment
// and the rank-one matrix equation).

#include <optional>

#include "mhdci/phase_space.hpp"

namespace mhdci {

struct WaveVector {
  Vec3 xiX;
  double xiT = 0.0;
  Vec4 vec() const { return extend(xiX, xiT); }
};

// Residuals of the three plane-wave conditions for a direction V̄ and ξ:
//   (1) ξ_x·u and ξ_x·B,  (2) ξ_t u + S ξ_x,  (3) ξ_t B + ξ_x×E.
struct ConeResiduals {
  double orthogonality = 0;  // condition (1)
  double momentum = 0;       // condition (2)
  double faraday = 0;        // condition (3)
  double total() const { return std::max({orthogonality, momentum, faraday}); }
};
ConeResiduals coneResiduals(const State15& dir, const WaveVector& xi);

struct NotInCone : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidSegment : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateProjection : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ZeroVector : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Constructive certificate for (u,B,E) with B·E=0: returns ξ with ξ_x≠0
// satisfying ξ_x·B=0, ξ_x·u=0 (when attainable) and ξ_t B + ξ_x×E = 0.
// Branches: ξ_x = B×u when B×u≠0 (then ξ_t is forced); otherwise ξ_t=0 with
// ξ_x along E if E≠0, else any ξ_x ⊥ B (and ⊥ u).
WaveVector findXi(const Vec3& u, const Vec3& B, const Vec3& E, const Tol& tol = {});

// Full wave-cone membership: the three conditions are linear in (ξ_x,ξ_t),
// so the certificate search is a deterministic nullspace computation; a
// certificate requires ξ_x ≠ 0.
std::optional<WaveVector> inLambda(const State15& v, const Tol& tol = {});

struct SegmentSpec {
  State15 base;                           // V₀
  State15 direction;                      // V̄; endpoints V₀+λV̄, V₀−(1−λ)V̄
  double lambda = 0.5;
  std::optional<WaveVector> certificate;  // for V̄
};
inline State15 endpointPlus(const SegmentSpec& s) { return s.base + s.direction * s.lambda; }
inline State15 endpointMinus(const SegmentSpec& s) { return s.base - s.direction * (1.0 - s.lambda); }

struct GoodnessVerdict {
  enum class Kind { Good1, Good2, Good3, Good4, Bad };
  Kind kind = Kind::Bad;
  std::optional<double> k;        // Good3 proportionality ω = k ω₀
  std::optional<double> c1, c2;   // Good2 solution of the potential condition
};
const char* kindName(GoodnessVerdict::Kind k);

// Solve (c₂ v₀ − c₁ w₀) ∧ ξ = ω in least squares; returns (c1, c2, residual)
// plus a condition estimate of the two-column system (ratio of the leading
// column scale to the orthogonalized second column).
struct PotentialSolution {
  double c1 = 0, c2 = 0, residual = 0;
  double kappa = 1;
};
PotentialSolution solvePotentialCondition(const Vec4& v0, const Vec4& w0,
                                          const Vec4& xi, const Bivector& omega);

struct ClassifyOptions {
  Tol tol{};
  double kExclusionMargin = 1e-6;  // relative margin around the forbidden k's
};
// Cases tested in order Good1 → Good4; first match wins. Throws
// InvalidSegment when endpoints leave M or the certificate fails.
GoodnessVerdict classifySegment(const SegmentSpec& seg, const ClassifyOptions& opt = {});

// Tube lemma: rotate the orthonormal frame (v2,w2) inside its own plane so it
// aligns with v1; the bivector v2∧w2 is preserved exactly.
std::pair<Vec4, Vec4> realignFactors(const Vec4& v1, const Vec4& w1,
                                     const Vec4& v2, const Vec4& w2);

// S = (x⊗y + y⊗x − (x·y)I)/|x|²; S x = y, ‖S‖_op ≤ 3|y|/|x|.
Mat3 solveMatrixEq(const Vec3& x, const Vec3& y);

// Theorem validation: a good Λ-segment whose endpoints are constitutive forces
// the base to be constitutive as well.
bool rigidityCheck(const SegmentSpec& seg, const ClassifyOptions& opt = {});

}  // namespace mhdci
