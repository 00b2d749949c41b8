// Hot row kernels with runtime-dispatched SIMD variants.
//
// Both operations are elementwise (no cross-lane reductions), and min/add are
// exact IEEE operations, so every variant produces bit-identical results; the
// equivalence tests assert exactly that.  Preconditions: `a` is finite and no
// input holds NaN; +infinity entries in `b`/`out` are propagated correctly.
//
// Selection: PGI_KERNEL=scalar|avx2|neon forces a variant (unavailable ones
// fall back to scalar); otherwise the best available variant is used.

#pragma once

#include <cstddef>

namespace pgi::kern {

struct Ops {
  const char* name;
  // out[t] = min(out[t], a + b[t]) for t in [0, m)
  void (*axpy_min)(double a, const double* b, double* out, std::size_t m);
  // out[t] = min(out[t], b[t]) for t in [0, m)
  void (*vmin)(const double* b, double* out, std::size_t m);
};

const Ops& scalar_ops();
bool avx2_available();
const Ops& avx2_ops();    // falls back to scalar_ops() when unavailable
bool neon_available();
const Ops& neon_ops();    // falls back to scalar_ops() when unavailable

// The dispatched variant (cached after the first call).
const Ops& ops();

}  // namespace pgi::kern
