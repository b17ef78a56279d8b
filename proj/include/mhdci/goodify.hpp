#pragma once
// Replacement of bad Λ-splits by good ones: the constructive content of the
// equivalence between Λ-hulls and Λ_g-hulls of relatively open sets. Bad
// nodes are repaired by inserting a small bivector perturbation W; the shift
// stays below the laminate's endpoint and barycenter tolerances, so the two
// shifted copies of the segment reuse the original child subtrees and the
// atoms are untouched.

#include "mhdci/hull.hpp"

namespace mhdci {

struct AtomOnBoundary : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RepairFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GoodifyOptions {
  ClassifyOptions classify{};
  double marginFloor = 1e-9;  // minimal admissible atom margin
  int maxRetries = 40;        // perturbation-size halvings before giving up
};

// Atoms must lie strictly inside B_M(K_{τr,τs}, ε_τ); the output laminate has
// the same barycenter, atoms in the same open set, and no Bad verdict.
Laminate goodify(const Laminate& lam, const HullParams& hp,
                 const GoodifyOptions& opt = {});

}  // namespace mhdci
