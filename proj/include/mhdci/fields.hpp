#pragma once
// Periodic vector fields on the 2π-torus, sampled on a uniform n³ grid, with
// spectral curl and vector-potential inverses.

#include <functional>
#include <vector>

#include "mhdci/linalg.hpp"

namespace mhdci {

struct VecField3 {
  int n = 0;
  std::vector<double> x, y, z;

  std::size_t size() const { return x.size(); }
  double h() const;
  static VecField3 zeros(int n);
};

// row-major index (i fastest along x3? layout: idx = (i*n + j)*n + k with
// coordinates x1 = 2π i/n, x2 = 2π j/n, x3 = 2π k/n)
VecField3 sampleField(int n, const std::function<Vec3(const Vec3&)>& f);

VecField3 curl(const VecField3& F);
// divergence-free A with curl A = B; requires B mean-free and div-free
VecField3 vectorPotential(const VecField3& B);
double divergenceMax(const VecField3& F);

// trapezoidal (= spectral) integrals over the torus
double integralDot(const VecField3& a, const VecField3& b);
double integralSquare(const VecField3& a);

// ∫ A·B with A = curl⁻¹ B
double magneticHelicity(const VecField3& B);

}  // namespace mhdci
