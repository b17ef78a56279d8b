#pragma once
// Oriented space-time cubes with tensor-product polynomial cutoffs, and a
// dyadic covering of box domains by such cubes.

#include <array>
#include <functional>
#include <stdexcept>
#include <vector>

#include "mhdci/linalg.hpp"

namespace mhdci {

struct ResolutionExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CoverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Cube of the given side around `center`, axes along the orthonormal frame.
// The cutoff χ is a product of 1-d C³ bumps: identically 1 on the inner cube
// of volume fraction (1 − eps/3), zero outside, polynomial in between.
struct CubeSpec {
  Vec4 center{};
  double side = 1.0;
  double eps = 0.1;
  std::array<Vec4, 4> frame = {Vec4{1, 0, 0, 0}, Vec4{0, 1, 0, 0},
                               Vec4{0, 0, 1, 0}, Vec4{0, 0, 0, 1}};

  // frame coordinates of (p − center)/side; the cube is |y_j| ≤ 1/2
  Vec4 local(const Vec4& p) const;
  Vec4 global(const Vec4& y) const;

  double innerHalf() const;  // local half-width of the χ = 1 region
  double chi(const Vec4& p) const;
  Vec4 gradChi(const Vec4& p) const;   // gradient in global coordinates
  Mat4 hessChi(const Vec4& p) const;   // Hessian in global coordinates
  bool insideInner(const Vec4& p) const;
  bool insideSupport(const Vec4& p) const;
  double gradBound() const;  // sup |∇χ|, attained on a single transition
  double volume() const { return side * side * side * side; }
};

// Orthonormal frame completion: axis1 (and axis2, orthogonalized against it)
// become the first frame vectors when nonzero.
CubeSpec makeCube(const Vec4& center, double side, double eps,
                  const Vec4& axis1 = {}, const Vec4& axis2 = {});

struct Box4 {
  Vec4 lo, hi;
  Vec4 extent() const { return hi - lo; }
};

// Partition the box into cubes, then refine dyadically (16 children) until
// `fineEnough` accepts each cube. The box extents must be integer multiples
// of the smallest one.
std::vector<CubeSpec> coverDomain(const Box4& domain,
                                  const std::function<bool(const CubeSpec&)>& fineEnough,
                                  double eps, int maxDepth = 8);

}  // namespace mhdci
