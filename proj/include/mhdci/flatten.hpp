#pragma once
// Pullback modification of Clebsch factors: wherever the factors are
// degenerate (v∧w = 0) without vanishing, the field is reparametrized by a
// cutoff contraction toward a cube center, which makes the pulled-back
// factors identically zero on the inner plateau while leaving the field
// untouched outside the cube.

#include <functional>
#include <vector>

#include "mhdci/wave_synthesis.hpp"

namespace mhdci {

using WField = std::function<State17(const Vec4&)>;

struct FlattenResult {
  WField field;
  int modified = 0;          // cubes that received a pullback
  std::vector<CubeSpec> patches;
};

// `eps`: the plateau of each patch keeps volume fraction (1 − eps/2) of its
// cube. Throws CoverFailure when the field oscillates too much across a cube
// that needs flattening.
FlattenResult flattenClebsch(const WField& f, const std::vector<CubeSpec>& cover,
                             double eps, double degenerateTol = 1e-9);

}  // namespace mhdci
