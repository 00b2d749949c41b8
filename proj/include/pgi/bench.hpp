// Synthetic benchmark family, timing harness, and scaling-exponent fit.
//
// The generated family: binary alphabet {0,1}, vocabulary of all 16 words of
// length 4 (each placement carrying its own uniform [0,1) cost) plus the
// cost-free word "11", and a depth-2 interaction grammar with the single pair
// ("11", "11") whose per-level weights are dense position tables drawn
// uniformly from [0, C).  C = 0 therefore makes every rule weight exactly 0.
//
// Reproducibility: generation uses SyntheticRng below — a fixed, named,
// portable generator — so a (n, C, seed) triple yields a byte-identical
// serialized instance on every platform.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pgi/apsp.hpp"
#include "pgi/oracle.hpp"

namespace pgi {

// Portable uniform source pinned by the published file-format docs: a
// std::mt19937_64 engine seeded directly with `seed`; each unit() draw takes
// the engine's next 64-bit output, keeps the top 53 bits, and scales by
// 2^-53:  unit = (g() >> 11) * 0x1.0p-53, uniform on [0, 1).
// std::uniform_real_distribution is deliberately avoided because its output
// sequence is implementation-defined.
class SyntheticRng {
 public:
  explicit SyntheticRng(std::uint64_t seed) : engine_(seed) {}
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

// Builds the benchmark instance for chain length n >= 1 and weight scale
// C >= 0.  Draw order (fixed forever, so files are byte-identical across
// runs): placement costs first — for each start position ascending, each
// length-4 word in lexicographic order — then the two weight tables, level 1
// before level 2, rows top to bottom, each row left to right.
Instance gen_synthetic(int n, double C, std::uint64_t seed);

struct BenchRow {
  std::string algorithm;  // "interaction"
  std::string backend;    // "reference" | "useful-edge"
  int n = 0;
  double C = 0.0;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
};

struct BenchConfig {
  int n_min = 10;
  int n_max = 350;
  int n_step = 10;
  std::vector<double> c_list = {0.0, 1.0, 10.0};
  std::vector<std::uint64_t> seeds = {1};
  ApspBackend backend = ApspBackend::UsefulEdge;
  double fit_lo = 100.0;
  double fit_hi = 350.0;
};

// Times one value-only solve of an interaction instance.  Only the solver
// call is measured (steady_clock); generation, vocabulary normalization, and
// index construction happen outside the timed region.
BenchRow time_solve(const Instance& inst, ApspBackend backend, double C, std::uint64_t seed);

// Generates and times every (n, C, seed) combination of `config`, in that
// loop order.  When `progress` is given, one line per run is written to it.
std::vector<BenchRow> run_bench(const BenchConfig& config, std::ostream* progress = nullptr);

struct ExponentFit {
  double exponent = 0.0;      // least-squares slope of log t against log n
  double log_scale = 0.0;     // intercept
  double rms_residual = 0.0;  // root-mean-square residual in log space
  int points = 0;
};

// Fits t ~ scale * n^exponent by least squares on (log n, log t).  Throws
// InputError on fewer than two points, nonpositive coordinates, or a single
// distinct n.
ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& points);

// CSV rendering: header "algorithm,backend,n,C,seed,wall_seconds" plus one
// line per row.
std::string bench_csv(const std::vector<BenchRow>& rows);

// Per-C exponent fits over rows with fit_lo <= n <= fit_hi.  Measured times
// are clamped to >= 1 ns before the fit so clock-resolution zeros at tiny n
// cannot poison the logs.
std::string bench_summary(const std::vector<BenchRow>& rows, double fit_lo, double fit_hi);

}  // namespace pgi
