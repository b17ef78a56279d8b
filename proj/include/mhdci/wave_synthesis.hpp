#pragma once
// Localized oscillations along good Λ-segments. The Maxwell part is built
// from Clebsch potentials (so B·E = 0 holds pointwise by construction), the
// fluid part from the quadratic potential operator. Laminates are realized
// recursively: on the exact plateaus of one oscillation the next one is
// placed inside lazily computed lattice subcubes, so evaluation never
// enumerates the subdivision.

#include <cstdint>
#include <memory>
#include <vector>

#include "mhdci/cube.hpp"
#include "mhdci/fluid_potential.hpp"
#include "mhdci/laminate.hpp"
#include "mhdci/sawtooth.hpp"

namespace mhdci {

struct BadSegment : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FrequencyTooLow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Primal state W = (u, S, v, w); the projection p(W) = (u, S, v∧w) carries
// the Maxwell form through its Clebsch factors.
struct State17 {
  Vec3 u;
  Mat3 S;
  Vec4 v, w;

  State17 operator+(const State17& o) const { return {u + o.u, S + o.S, v + o.v, w + o.w}; }
  State17 operator-(const State17& o) const { return {u - o.u, S - o.S, v - o.v, w - o.w}; }
  State17 operator*(double c) const { return {u * c, S * c, v * c, w * c}; }
};
State15 project(const State17& w);
inline double norm(const State17& w) {
  double f = frobenius(w.S);
  return std::sqrt(norm2(w.u) + f * f + dot(w.v, w.v) + dot(w.w, w.w));
}

struct SynthesisOptions {
  double eps = 0.05;       // transition fraction for sawtooth and cutoff
  double subRefine = 32;   // plateau thickness / subcube side at the next level
  double minEll = 4;       // below this the cube holds no full oscillation
  ClassifyOptions classify{};
};

class LocalizedWave {
 public:
  // V_ℓ(x,t); equals p(base) exactly outside the cube
  State15 eval(const Vec4& p) const;
  State17 evalW(const Vec4& p) const;

  struct PointInfo {
    State17 W;
    int atom = -1;  // deepest exact plateau atom at p, −1 on transitions
  };
  PointInfo evalInfo(const Vec4& p) const;

  // first-order profile V₀ + χ h'' V̄ of the top oscillation; the sup
  // distance to eval decays like 1/ℓ
  State15 leadingOrder(const Vec4& p) const;

  const CubeSpec& cube() const { return cube_; }
  const State17& base() const { return base_; }
  int atomCount() const { return (int)atomStates_.size(); }
  const std::vector<State15>& atomStates() const { return atomStates_; }
  const std::vector<double>& atomWeights() const { return atomWeights_; }

  struct Cell;

 private:
  friend LocalizedWave synthesizeLaminate(const State17&, const Laminate&,
                                          const CubeSpec&, const std::vector<double>&,
                                          const SynthesisOptions&);
  CubeSpec cube_;
  State17 base_;
  std::shared_ptr<const Cell> root_;
  std::vector<State15> atomStates_;
  std::vector<double> atomWeights_;
};

LocalizedWave synthesizeWave(const State17& W0, const SegmentSpec& seg,
                             const CubeSpec& cube, double ell,
                             const SynthesisOptions& opt = {});

// All split verdicts must be good; the frequency schedule supplies one ℓ per
// tree level (Good λ≠1/2 type-4 splits consume an extra internal level, the
// schedule is clamped to its last entry past the end).
LocalizedWave synthesizeLaminate(const State17& W0, const Laminate& lam,
                                 const CubeSpec& cube,
                                 const std::vector<double>& ellSchedule,
                                 const SynthesisOptions& opt = {});

struct PlateauReport {
  std::vector<double> fraction;  // per atom, relative to the cube volume
  double offPlateau = 0;         // transition + cutoff fraction
};
PlateauReport measurePlateaus(const LocalizedWave& w, int samples, std::uint64_t seed);

// sup-norm distance between eval and leadingOrder over Monte Carlo samples
double cancellationError(const LocalizedWave& w, int samples, std::uint64_t seed);

}  // namespace mhdci
