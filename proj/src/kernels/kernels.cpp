// Scalar reference kernels and the runtime dispatch.

#include "pgi/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace pgi::kern {

namespace {

void axpy_min_scalar(double a, const double* b, double* out, std::size_t m) {
  for (std::size_t t = 0; t < m; ++t) {
    double cand = a + b[t];
    if (cand < out[t]) out[t] = cand;
  }
}

void vmin_scalar(const double* b, double* out, std::size_t m) {
  for (std::size_t t = 0; t < m; ++t)
    if (b[t] < out[t]) out[t] = b[t];
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{"scalar", axpy_min_scalar, vmin_scalar};
  return ops;
}

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

bool neon_available() {
#if defined(__aarch64__)
  return true;
#else
  return false;
#endif
}

const Ops& ops() {
  static const Ops& selected = []() -> const Ops& {
    const char* env = std::getenv("PGI_KERNEL");
    if (env != nullptr) {
      if (std::strcmp(env, "scalar") == 0) return scalar_ops();
      if (std::strcmp(env, "avx2") == 0) return avx2_ops();
      if (std::strcmp(env, "neon") == 0) return neon_ops();
    }
    if (avx2_available()) return avx2_ops();
    if (neon_available()) return neon_ops();
    return scalar_ops();
  }();
  return selected;
}

}  // namespace pgi::kern
