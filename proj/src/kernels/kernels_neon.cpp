// NEON variants of the row kernels.  Selection uses an explicit compare so the
// tie and signed-zero behavior is bit-identical to the scalar reference
// (FMIN's minNum semantics would differ on signed zeros).

#include "pgi/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

namespace pgi::kern {

namespace {

void axpy_min_neon(double a, const double* b, double* out, std::size_t m) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t t = 0;
  for (; t + 2 <= m; t += 2) {
    float64x2_t cand = vaddq_f64(va, vld1q_f64(b + t));
    float64x2_t cur = vld1q_f64(out + t);
    uint64x2_t lt = vcltq_f64(cand, cur);
    vst1q_f64(out + t, vbslq_f64(lt, cand, cur));
  }
  for (; t < m; ++t) {
    double cand = a + b[t];
    if (cand < out[t]) out[t] = cand;
  }
}

void vmin_neon(const double* b, double* out, std::size_t m) {
  std::size_t t = 0;
  for (; t + 2 <= m; t += 2) {
    float64x2_t vb = vld1q_f64(b + t);
    float64x2_t cur = vld1q_f64(out + t);
    uint64x2_t lt = vcltq_f64(vb, cur);
    vst1q_f64(out + t, vbslq_f64(lt, vb, cur));
  }
  for (; t < m; ++t)
    if (b[t] < out[t]) out[t] = b[t];
}

}  // namespace

const Ops& neon_ops() {
  static const Ops ops{"neon", axpy_min_neon, vmin_neon};
  return ops;
}

}  // namespace pgi::kern

#else

namespace pgi::kern {
const Ops& neon_ops() { return scalar_ops(); }
}  // namespace pgi::kern

#endif
