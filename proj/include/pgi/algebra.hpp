// Value algebras for the message recursions.  Each algebra supplies the
// aggregation (combine), composition (extend), composition inverse (retract),
// identities, and an embedding of raw energies (inject).  Running the same
// recursion under the three algebras yields the minimum energy, the log
// partition sum of exp(-energy), and the maximum of exp(-energy).

#pragma once

#include <algorithm>
#include <cmath>

#include "pgi/pattern.hpp"

namespace pgi {

// Numerically stable log(exp(a) + exp(b)).
inline double logaddexp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

// Minimization: values are energies.
struct Tropical {
  using Value = double;
  static constexpr bool supports_argmin = true;
  static Value zero() { return kInf; }
  static Value one() { return 0.0; }
  static Value combine(Value a, Value b) { return std::min(a, b); }
  static Value extend(Value a, Value b) { return a + b; }
  static Value retract(Value a, Value b) { return a - b; }
  static Value inject(double energy) { return energy; }
};

// Summation: values are log-masses of exp(-energy); combine is log-sum-exp.
struct LogSum {
  using Value = double;
  static constexpr bool supports_argmin = false;
  static Value zero() { return -kInf; }
  static Value one() { return 0.0; }
  static Value combine(Value a, Value b) { return logaddexp(a, b); }
  static Value extend(Value a, Value b) { return a + b; }
  static Value retract(Value a, Value b) { return a - b; }
  static Value inject(double energy) { return -energy; }
};

// Maximization of exp(-energy): values are non-negative masses.
struct MaxProd {
  using Value = double;
  static constexpr bool supports_argmin = false;
  static Value zero() { return 0.0; }
  static Value one() { return 1.0; }
  static Value combine(Value a, Value b) { return std::max(a, b); }
  static Value extend(Value a, Value b) { return a * b; }
  static Value retract(Value a, Value b) { return a / b; }
  static Value inject(double energy) { return std::exp(-energy); }
};

}  // namespace pgi
