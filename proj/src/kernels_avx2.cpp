// Compiled with -mavx2 -mfma; only reached through the runtime dispatch in
// kernels.cpp.
#include <immintrin.h>

#include "mhdci/kernels.hpp"

namespace mhdci::detail {

namespace {

double hadd(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double sumAvx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double t = hadd(acc);
  for (; i < n; ++i) t += x[i];
  return t;
}

double dotAvx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  double t = hadd(acc);
  for (; i < n; ++i) t += x[i] * y[i];
  return t;
}

double sumSquaresAvx2(const double* x, std::size_t n) { return dotAvx2(x, x, n); }

}  // namespace

extern const ReduceOps kAvx2Ops{sumAvx2, dotAvx2, sumSquaresAvx2, "avx2"};

}  // namespace mhdci::detail
