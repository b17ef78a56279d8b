#pragma once
// Constructive hull decompositions: every state in the relaxed neighborhood
// V_{τr,τs,ε_τ} is split by the explicit step (i)-(v) recipes into a laminate
// whose atoms lie in K_{r,s}.

#include <random>

#include "mhdci/laminate.hpp"

namespace mhdci {

struct OutOfRange : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotInRelaxedSet : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotScaledK : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HullParams {
  ConstraintParams base;
  double tau = 0.9;
  double epsTauOverride = 0.0;  // 0 = use the default rule

  double epsTau() const {
    if (epsTauOverride > 0.0) return epsTauOverride;
    return 0.05 * std::min(base.r, base.s) * (1.0 - tau);
  }
  // advisory step envelopes; inner steps tolerate larger perturbations
  // (chain ratio 8), the outermost matches the membership slack
  double envelope(int k) const {  // k = 1..5
    double e = epsTau();
    for (int i = 5; i > k; --i) e *= 8.0;
    return e;
  }
};

// step (i): scale both Elsässer variables onto their spheres; <= 4 atoms,
// all exactly in K_{r,s} (degenerate z+ = 0 / z- = 0 branches included)
Laminate relaxNormalization(const Vec3& zPlus, const Vec3& zMinus, double Pi,
                            const ConstraintParams& p);

// step (ii): remove a +e⊗e stress term via the two-point split
// S_{u,B} + e⊗e = (S_{u+e,B} + S_{u-e,B})/2
Laminate addRankOne(const Vec3& u, const Vec3& B, const Vec3& e, double Pi,
                    const ConstraintParams& p);

// step (iii): remove a general symmetric stress defect S
Laminate relaxFluid(const Vec3& u, const Vec3& B, const Mat3& S, double Pi,
                    const ConstraintParams& p);

// step (iv): remove an electric defect B×v on a magnetic background
Laminate relaxMagnetic(const Vec3& u, const Vec3& B, const Mat3& S, const Vec3& v,
                       double Pi, const ConstraintParams& p);

// step (v): remove an electric field with no magnetic background
Laminate relaxZeroB(const Vec3& u, const Mat3& S, const Vec3& E, double Pi,
                    const ConstraintParams& p);

// signed rank-one decomposition S = Σ c_i f_i⊗f_i (unit f_i), ≤ 3 terms
struct RankOneTerm {
  double c;
  Vec3 f;
};
std::vector<RankOneTerm> symmetricRankOneDecomposition(const Mat3& S);

// membership test for the relaxed neighborhood; returns the name of the
// violated inequality, or nullptr if the state is inside
const char* relaxedSetViolation(const State15& v, const HullParams& hp);

// random state strictly inside the relaxed neighborhood; deterministic for a
// fixed generator state
State15 sampleRelaxedState(std::mt19937_64& rng, const HullParams& hp);

Laminate decomposeFull(const State15& v, const HullParams& hp);

// one split sending a state of μ·K_{r,s} into K_{√μ r, √μ s}
Laminate scaleHull(const State15& v, double mu, const ConstraintParams& p);

// Eq. "Estimate on distance from K" checked per atom:
// (r²+s²)/2 − |u₀|²−|B₀|² ≤ 2(|u_j|²+|B_j|² − |u₀|²−|B₀|²)
bool energyEstimateHolds(const State15& v, const Laminate& lam,
                         const ConstraintParams& p, double slack = 1e-9);

}  // namespace mhdci
