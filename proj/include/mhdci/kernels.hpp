#pragma once
// Grid reductions used by the conserved-quantity integrals. A vectorized
// variant is selected at runtime when the CPU supports it; both variants are
// exposed so tests can compare them on the same data.

#include <cstddef>

namespace mhdci {

struct ReduceOps {
  double (*sum)(const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*sumSquares)(const double*, std::size_t);
  const char* name;
};

const ReduceOps& scalarOps();
const ReduceOps* avx2Ops();    // nullptr if not compiled in or not supported
const ReduceOps& activeOps();

inline double gridSum(const double* x, std::size_t n) { return activeOps().sum(x, n); }
inline double gridDot(const double* x, const double* y, std::size_t n) {
  return activeOps().dot(x, y, n);
}
inline double gridSumSquares(const double* x, std::size_t n) {
  return activeOps().sumSquares(x, n);
}

}  // namespace mhdci
