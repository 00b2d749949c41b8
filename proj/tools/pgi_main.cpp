// Command-line front end: solve an instance file, generate synthetic
// benchmark instances, or run the timing grid and exponent fit.
//
// Exit codes: 0 success; 1 oracle mismatch under --oracle-check; 2 invalid
// input (bad flags, malformed or ill-typed instance files); 3 size refusal
// (an oracle enumeration cap would be exceeded).
//
// Output discipline: results go to stdout; timing and progress go to stderr,
// so machine-readable stdout is byte-stable across runs for fixed inputs.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pgi/bench.hpp"
#include "pgi/inference.hpp"
#include "pgi/interaction_solver.hpp"
#include "pgi/io.hpp"

namespace {

using namespace pgi;

bool close_rel(double a, double b, double rel = 1e-9) {
  if (std::isinf(a) || std::isinf(b) || std::isnan(a) || std::isnan(b)) return a == b;
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

std::string format_value(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

nlohmann::json json_value(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return v;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_double(const std::string& s, const std::string& flag) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError("cannot parse number \"" + s + "\" in " + flag);
  }
}

std::uint64_t parse_u64(const std::string& s, const std::string& flag) {
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError("cannot parse seed \"" + s + "\" in " + flag);
  }
}

struct SolveOutcome {
  double value = kInf;
  std::optional<std::string> labeling;    // argmin string, when the algorithm produces one
  std::optional<std::string> derivation;  // bracketed witness, when applicable
  double seconds = 0.0;
};

int run_solve(const std::string& path, const std::string& algorithm, const std::string& objective,
              const std::string& backend_name, bool oracle_check, const std::string& output) {
  static const std::set<std::string> kAlgorithms = {"general", "interaction", "d1", "earley-d1"};
  if (!kAlgorithms.count(algorithm))
    throw InputError("unknown algorithm \"" + algorithm +
                     "\" (choose general, interaction, d1, or earley-d1)");
  if (objective != "min" && objective != "logZ")
    throw InputError("unknown objective \"" + objective + "\" (choose min or logZ)");
  if (output != "text" && output != "machine-readable")
    throw InputError("unknown output mode \"" + output + "\" (choose text or machine-readable)");
  const ApspBackend backend = apsp_backend_from_string(backend_name);

  const Instance inst = load_instance(path);
  const CnfGrammar cnf = inst.effective_cnf();
  const Alphabet& alphabet = inst.weights.alphabet;

  SolveOutcome out;
  using clock = std::chrono::steady_clock;

  if (objective == "logZ") {
    if (algorithm != "general")
      throw InputError(
          "objective logZ is computed by --algorithm general "
          "(interaction instances are handled through their compiled grammar)");
    PatternWeights pw = normalize_terminal_words(inst.weights, cnf);
    PatternIndex index(pw);
    CostTables tables = compute_cost_tables(index, pw);
    BoundGrammar bound = BoundGrammar::bind(index, cnf);
    const auto t0 = clock::now();
    out.value = compute_span_chart<LogSum>(index, tables, bound).value;
    out.seconds = std::chrono::duration<double>(clock::now() - t0).count();
  } else if (algorithm == "general") {
    PatternWeights pw = normalize_terminal_words(inst.weights, cnf);
    PatternIndex index(pw);
    CostTables tables = compute_cost_tables(index, pw);
    BoundGrammar bound = BoundGrammar::bind(index, cnf);
    const auto t0 = clock::now();
    SpanChart<Tropical> chart = compute_span_chart<Tropical>(index, tables, bound);
    ArgminResult am = extract_argmin(index, tables, bound, chart);
    out.seconds = std::chrono::duration<double>(clock::now() - t0).count();
    out.value = chart.value;
    if (std::isfinite(out.value)) {
      out.labeling = alphabet.to_string(am.labeling);
      out.derivation = format_derivation(am.derivation, bound.grammar, alphabet, am.labeling);
    }
  } else {
    if (inst.is_cnf())
      throw InputError("algorithm \"" + algorithm +
                       "\" requires an interaction-grammar instance; use --algorithm general");
    const InteractionGrammar& ig = inst.interaction();
    PatternWeights pw = normalize_terminal_words(inst.weights, ig);
    PatternIndex index(pw);
    CostTables tables = compute_cost_tables(index, pw);
    if (algorithm == "interaction") {
      const auto t0 = clock::now();
      InteractionArgmin am = interaction_argmin(index, tables, ig, backend);
      out.seconds = std::chrono::duration<double>(clock::now() - t0).count();
      out.value = am.value;
      if (std::isfinite(out.value)) {
        out.labeling = alphabet.to_string(am.labeling);
        Derivation d;
        cyk_min_parse(am.labeling, cnf, &d);
        out.derivation = format_derivation(d, cnf, alphabet, am.labeling);
      }
    } else if (algorithm == "d1") {
      const auto t0 = clock::now();
      out.value = interaction_min_single_source(index, tables, ig);
      out.seconds = std::chrono::duration<double>(clock::now() - t0).count();
    } else {
      const auto t0 = clock::now();
      out.value = interaction_min_earley(index, tables, ig);
      out.seconds = std::chrono::duration<double>(clock::now() - t0).count();
    }
  }

  std::optional<std::string> oracle_status;
  if (oracle_check) {
    bool ok;
    if (objective == "min") {
      BruteResult want = brute_min(inst);  // SizeRefusal propagates as exit 3
      ok = close_rel(out.value, want.value);
      if (ok && out.labeling) {
        const double rescored =
            score_labeling(inst.weights, cnf, alphabet.word_from_string(*out.labeling));
        ok = close_rel(rescored, out.value);
      }
    } else {
      ok = close_rel(out.value, brute_logZ(inst));
    }
    oracle_status = ok ? "match" : "mismatch";
  }

  std::fprintf(stderr, "solve seconds: %.6f\n", out.seconds);

  if (output == "machine-readable") {
    nlohmann::json j;
    j["algorithm"] = algorithm;
    j["backend"] = to_string(backend);
    j["objective"] = objective;
    j["value"] = json_value(out.value);
    if (out.labeling) j["labeling"] = *out.labeling;
    if (out.derivation) j["derivation"] = *out.derivation;
    if (oracle_status) j["oracle"] = *oracle_status;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << (objective == "min" ? "M = " : "log Z = ") << format_value(out.value) << "\n";
    if (out.labeling) std::cout << "labeling: " << *out.labeling << "\n";
    if (out.derivation) std::cout << "derivation: " << *out.derivation << "\n";
    if (oracle_status) std::cout << "oracle check: " << *oracle_status << "\n";
  }
  return oracle_status && *oracle_status == "mismatch" ? 1 : 0;
}

int run_gen(int n, double C, std::uint64_t seed, const std::string& out_path) {
  const std::string text = serialize_instance(gen_synthetic(n, C, seed));
  if (out_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw InputError("cannot write instance file: " + out_path);
  f << text;
  if (!f) throw InputError("failed writing instance file: " + out_path);
  return 0;
}

int run_bench_cmd(int n_min, int n_max, int n_step, const std::string& c_list,
                  const std::string& seeds, const std::string& fit_range,
                  const std::string& backend_name, const std::string& out_path) {
  BenchConfig config;
  config.n_min = n_min;
  config.n_max = n_max;
  config.n_step = n_step;
  config.backend = apsp_backend_from_string(backend_name);
  config.c_list.clear();
  for (const std::string& s : split_commas(c_list))
    config.c_list.push_back(parse_double(s, "--C-list"));
  config.seeds.clear();
  for (const std::string& s : split_commas(seeds)) config.seeds.push_back(parse_u64(s, "--seeds"));
  const std::vector<std::string> range = split_commas(fit_range);
  if (range.size() != 2) throw InputError("--fit-range takes two numbers, e.g. 100,350");
  config.fit_lo = parse_double(range[0], "--fit-range");
  config.fit_hi = parse_double(range[1], "--fit-range");
  if (config.fit_lo > config.fit_hi) throw InputError("--fit-range lower bound exceeds upper bound");

  const std::vector<BenchRow> rows = run_bench(config, &std::cerr);
  const std::string csv = bench_csv(rows);
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw InputError("cannot write CSV file: " + out_path);
    f << csv;
    if (!f) throw InputError("failed writing CSV file: " + out_path);
  }
  std::cerr << bench_summary(rows, config.fit_lo, config.fit_hi);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact inference for pattern placement costs combined with grammar derivation costs"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "solve an instance file and print the result");
  std::string instance_path;
  std::string algorithm = "general";
  std::string objective = "min";
  std::string backend = "useful-edge";
  std::string output = "text";
  bool oracle_check = false;
  solve->add_option("--instance", instance_path, "instance file path")->required();
  solve->add_option("--algorithm", algorithm, "general | interaction | d1 | earley-d1");
  solve->add_option("--objective", objective, "min | logZ");
  solve->add_option("--backend", backend, "reference | useful-edge");
  solve->add_flag("--oracle-check", oracle_check,
                  "also run the brute-force oracle; exit 1 on mismatch");
  solve->add_option("--output", output, "text | machine-readable");

  auto* gen = app.add_subcommand("gen", "generate a synthetic benchmark instance");
  int gen_n = 10;
  double gen_c = 1.0;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("--n", gen_n, "chain length")->required();
  gen->add_option("--C", gen_c, "rule-weight scale (weights uniform on [0, C))")->required();
  gen->add_option("--seed", gen_seed, "generator seed")->required();
  gen->add_option("--out", gen_out, "output path (default: stdout)");

  auto* bench = app.add_subcommand("bench", "time solves over an n grid and fit the exponent");
  int n_min = 10, n_max = 350, n_step = 10;
  std::string c_list = "0,1,10";
  std::string seeds = "1";
  std::string fit_range = "100,350";
  std::string bench_backend = "useful-edge";
  std::string bench_out;
  bench->add_option("--n-min", n_min, "smallest chain length");
  bench->add_option("--n-max", n_max, "largest chain length");
  bench->add_option("--n-step", n_step, "chain length step");
  bench->add_option("--C-list", c_list, "comma-separated weight scales");
  bench->add_option("--seeds", seeds, "comma-separated seeds");
  bench->add_option("--fit-range", fit_range, "n range for the exponent fit, e.g. 100,350");
  bench->add_option("--backend", bench_backend, "reference | useful-edge");
  bench->add_option("--out", bench_out, "CSV path (default: stdout); summary goes to stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (solve->parsed())
      return run_solve(instance_path, algorithm, objective, backend, oracle_check, output);
    if (gen->parsed()) return run_gen(gen_n, gen_c, gen_seed, gen_out);
    return run_bench_cmd(n_min, n_max, n_step, c_list, seeds, fit_range, bench_backend, bench_out);
  } catch (const SizeRefusal& e) {
    std::cerr << "size refusal: " << e.what() << "\n";
    return 3;
  } catch (const InputError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
