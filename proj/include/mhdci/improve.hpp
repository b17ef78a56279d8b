#pragma once
// One improvement step for subsolutions: cover the domain by cubes on which
// the field is nearly constant, decompose each value through the relaxed-set
// recipes, repair the resulting laminate to good splits, and add a localized
// oscillation per cube. The energy strictly increases while pointwise values
// stay decomposable.

#include <cstdint>
#include <functional>
#include <vector>

#include "mhdci/flatten.hpp"
#include "mhdci/goodify.hpp"
#include "mhdci/wave_synthesis.hpp"

namespace mhdci {

struct NotSubsolution : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using VField = std::function<State15(const Vec4&)>;

struct ImproveOptions {
  HullParams hull{};        // target constraint parameters and τ
  double tau2 = 0.0;        // scale of the per-cube atoms; 0 → (1 + τ)/2
  double ell = 256;         // oscillations per cube at the top level
  double eps = 0.05;        // transition fraction
  int truncateDepth = 1;    // laminate levels realized per step; deeper trees
                            // raise the gain but also the oscillation constants
  double gamma = 0.0;       // cover rule slope; 0 → sqrt(minDeficit/10)
  int coverDepth = 6;
  int samples = 20000;      // Monte Carlo quadrature size
  int certifySamples = 1000;
  std::uint64_t seed = 1;
  double fdStep = 1e-3;
  SynthesisOptions synth{};
};

struct ImproveReport {
  double deficit = 0;        // mean of (r²+s²)/2 − |u|² − |B|²
  double gain = 0;           // mean energy increase
  double cHat = 0;           // gain / deficit, measured only
  double gamma = 0;
  int cubes = 0;
  int certified = 0;         // sample points passing a decomposition retry grid
  int certifyFailures = 0;
  double maxResidual = 0;    // finite-difference residual of the conservation laws
  double weakDistance = 0;   // |∫ (V' − V)·g| for a fixed smooth test function
};

class ImprovedField {
 public:
  State15 eval(const Vec4& p) const;
  const std::vector<LocalizedWave>& waves() const { return waves_; }

 private:
  friend std::pair<ImprovedField, ImproveReport> improveStep(const VField&, const Box4&,
                                                             const ImproveOptions&);
  VField base_;
  std::vector<LocalizedWave> waves_;
};

std::pair<ImprovedField, ImproveReport> improveStep(const VField& V, const Box4& domain,
                                                    const ImproveOptions& opt = {});

}  // namespace mhdci
