#include "mhdci/kernels.hpp"

namespace mhdci {

namespace {

double sumScalar(const double* x, std::size_t n) {
  double a0 = 0, a1 = 0, a2 = 0, a3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a0 += x[i];
    a1 += x[i + 1];
    a2 += x[i + 2];
    a3 += x[i + 3];
  }
  for (; i < n; ++i) a0 += x[i];
  return (a0 + a1) + (a2 + a3);
}

double dotScalar(const double* x, const double* y, std::size_t n) {
  double a0 = 0, a1 = 0, a2 = 0, a3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a0 += x[i] * y[i];
    a1 += x[i + 1] * y[i + 1];
    a2 += x[i + 2] * y[i + 2];
    a3 += x[i + 3] * y[i + 3];
  }
  for (; i < n; ++i) a0 += x[i] * y[i];
  return (a0 + a1) + (a2 + a3);
}

double sumSquaresScalar(const double* x, std::size_t n) { return dotScalar(x, x, n); }

const ReduceOps kScalar{sumScalar, dotScalar, sumSquaresScalar, "scalar"};

}  // namespace

const ReduceOps& scalarOps() { return kScalar; }

#if defined(MHDCI_HAVE_AVX2_TU)
namespace detail {
extern const ReduceOps kAvx2Ops;
}
const ReduceOps* avx2Ops() {
  return __builtin_cpu_supports("avx2") ? &detail::kAvx2Ops : nullptr;
}
#else
const ReduceOps* avx2Ops() { return nullptr; }
#endif

const ReduceOps& activeOps() {
  static const ReduceOps* picked = [] {
    if (const ReduceOps* v = avx2Ops()) return v;
    return &kScalar;
  }();
  return *picked;
}

}  // namespace mhdci
