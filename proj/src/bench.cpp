// Benchmark-family generation, solve timing, CSV rendering, and the log-log
// exponent fit.

#include "pgi/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

#include "pgi/grammar.hpp"
#include "pgi/interaction_solver.hpp"

namespace pgi {
namespace {

// The v-th length-4 binary word in lexicographic order (label "0" sorts
// before "1", so lexicographic equals numeric on the 4-bit value).
Word nibble_word(int v) {
  Word w(4);
  for (int b = 0; b < 4; ++b) w[b] = static_cast<Label>((v >> (3 - b)) & 1);
  return w;
}

std::string format_double(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

}  // namespace

Instance gen_synthetic(int n, double C, std::uint64_t seed) {
  if (n < 1) throw InputError("gen_synthetic requires n >= 1");
  if (!(C >= 0.0) || !std::isfinite(C)) throw InputError("gen_synthetic requires finite C >= 0");

  SyntheticRng rng(seed);
  Instance inst;
  PatternWeights& pw = inst.weights;
  pw.n = n;
  pw.alphabet = Alphabet({"0", "1"});
  for (int v = 0; v < 16; ++v) pw.vocabulary.push_back(nibble_word(v));
  // The wrap word, added cost-free so the pair words live in the vocabulary;
  // zero-cost placements leave every energy unchanged.
  const Word wrap = {Label{1}, Label{1}};
  pw.vocabulary.push_back(wrap);

  // Placement costs: starts ascending, words in lexicographic order.
  for (int start = 1; start + 3 <= n; ++start)
    for (int v = 0; v < 16; ++v) pw.cost[{v, start}] = rng.unit();

  // Wrap weights: one dense staircase table per level, level 1 first, rows
  // top to bottom, entries left to right, uniform on [0, C).
  InteractionGrammar ig;
  ig.depth = 2;
  InteractionPair pair;
  pair.left = wrap;
  pair.right = wrap;
  for (int level = 1; level <= 2; ++level) {
    std::vector<std::vector<double>> rows(n);
    for (int i = 1; i <= n; ++i) {
      rows[i - 1].resize(n - i + 1);
      for (double& x : rows[i - 1]) x = C * rng.unit();
    }
    pair.theta.push_back(WeightSpec::table(std::move(rows)));
  }
  ig.pairs.push_back(std::move(pair));
  inst.grammar = std::move(ig);
  return inst;
}

BenchRow time_solve(const Instance& inst, ApspBackend backend, double C, std::uint64_t seed) {
  const InteractionGrammar& ig = inst.interaction();
  PatternWeights pw = normalize_terminal_words(inst.weights, ig);
  PatternIndex index(pw);
  CostTables tables = compute_cost_tables(index, pw);

  const auto t0 = std::chrono::steady_clock::now();
  double value = interaction_min(index, tables, ig, backend);
  const auto t1 = std::chrono::steady_clock::now();
  (void)value;

  BenchRow row;
  row.algorithm = "interaction";
  row.backend = to_string(backend);
  row.n = inst.weights.n;
  row.C = C;
  row.seed = seed;
  row.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
  return row;
}

std::vector<BenchRow> run_bench(const BenchConfig& config, std::ostream* progress) {
  if (config.n_min < 1 || config.n_max < config.n_min || config.n_step < 1)
    throw InputError("bench requires 1 <= n-min <= n-max and n-step >= 1");
  if (config.c_list.empty() || config.seeds.empty())
    throw InputError("bench requires at least one C value and one seed");

  std::vector<BenchRow> rows;
  for (int n = config.n_min; n <= config.n_max; n += config.n_step) {
    for (double C : config.c_list) {
      for (std::uint64_t seed : config.seeds) {
        Instance inst = gen_synthetic(n, C, seed);
        rows.push_back(time_solve(inst, config.backend, C, seed));
        if (progress)
          (*progress) << "n=" << n << " C=" << format_double("%g", C) << " seed=" << seed << " "
                      << format_double("%.6f", rows.back().wall_seconds) << "s\n";
      }
    }
  }
  return rows;
}

ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw InputError("exponent fit needs at least two timing points");
  double mx = 0.0, my = 0.0;
  for (const auto& [n, t] : points) {
    if (!(n > 0.0) || !(t > 0.0))
      throw InputError("exponent fit needs positive sizes and times");
    mx += std::log(n);
    my += std::log(t);
  }
  const double k = static_cast<double>(points.size());
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [n, t] : points) {
    const double dx = std::log(n) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(t) - my);
  }
  if (sxx == 0.0) throw InputError("exponent fit needs at least two distinct n values");

  ExponentFit fit;
  fit.exponent = sxy / sxx;
  fit.log_scale = my - fit.exponent * mx;
  double ss = 0.0;
  for (const auto& [n, t] : points) {
    const double r = std::log(t) - (fit.log_scale + fit.exponent * std::log(n));
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / k);
  fit.points = static_cast<int>(points.size());
  return fit;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "algorithm,backend,n,C,seed,wall_seconds\n";
  for (const BenchRow& r : rows)
    out << r.algorithm << "," << r.backend << "," << r.n << "," << format_double("%g", r.C) << ","
        << r.seed << "," << format_double("%.9f", r.wall_seconds) << "\n";
  return out.str();
}

std::string bench_summary(const std::vector<BenchRow>& rows, double fit_lo, double fit_hi) {
  // Group fit points per (algorithm, backend, C).
  std::map<std::pair<std::pair<std::string, std::string>, double>,
           std::vector<std::pair<double, double>>>
      groups;
  for (const BenchRow& r : rows) {
    if (r.n < fit_lo || r.n > fit_hi) continue;
    const double t = std::max(r.wall_seconds, 1e-9);  // absorb clock-resolution zeros
    groups[{{r.algorithm, r.backend}, r.C}].push_back({static_cast<double>(r.n), t});
  }
  std::ostringstream out;
  for (const auto& [key, points] : groups) {
    const auto& [names, C] = key;
    out << names.first << " backend=" << names.second << " C=" << format_double("%g", C) << ": ";
    try {
      ExponentFit fit = fit_exponent(points);
      out << "exponent " << format_double("%.3f", fit.exponent) << " (rms residual "
          << format_double("%.3f", fit.rms_residual) << ", " << fit.points << " points, n in ["
          << format_double("%g", fit_lo) << ", " << format_double("%g", fit_hi) << "])\n";
    } catch (const InputError& e) {
      out << "no fit (" << e.what() << ")\n";
    }
  }
  if (groups.empty())
    out << "no timing points inside the fit range [" << format_double("%g", fit_lo) << ", "
        << format_double("%g", fit_hi) << "]\n";
  return out.str();
}

}  // namespace pgi
