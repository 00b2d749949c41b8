// AVX2 variants of the row kernels.  This translation unit is compiled with
// -mavx2; callers must check avx2_available() before dispatching here.

#include "pgi/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace pgi::kern {

namespace {

void axpy_min_avx2(double a, const double* b, double* out, std::size_t m) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t t = 0;
  for (; t + 4 <= m; t += 4) {
    __m256d cand = _mm256_add_pd(va, _mm256_loadu_pd(b + t));
    __m256d cur = _mm256_loadu_pd(out + t);
    _mm256_storeu_pd(out + t, _mm256_min_pd(cand, cur));
  }
  for (; t < m; ++t) {
    double cand = a + b[t];
    if (cand < out[t]) out[t] = cand;
  }
}

void vmin_avx2(const double* b, double* out, std::size_t m) {
  std::size_t t = 0;
  for (; t + 4 <= m; t += 4) {
    __m256d vb = _mm256_loadu_pd(b + t);
    __m256d cur = _mm256_loadu_pd(out + t);
    _mm256_storeu_pd(out + t, _mm256_min_pd(vb, cur));
  }
  for (; t < m; ++t)
    if (b[t] < out[t]) out[t] = b[t];
}

}  // namespace

const Ops& avx2_ops() {
  static const Ops ops{"avx2", axpy_min_avx2, vmin_avx2};
  return ops;
}

}  // namespace pgi::kern

#else

namespace pgi::kern {
const Ops& avx2_ops() { return scalar_ops(); }
}  // namespace pgi::kern

#endif
