// Synthetic-family generator and benchmark harness: reproducibility, shape,
// oracle agreement at small n, and the exponent fitter on constructed data.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "pgi/bench.hpp"
#include "pgi/interaction_solver.hpp"
#include "pgi/io.hpp"
#include "support.hpp"

using namespace pgi;
using namespace pgi::test;

TEST_CASE("generated instances are reproducible and well shaped") {
  const std::string a = serialize_instance(gen_synthetic(10, 0.0, 7));
  const std::string b = serialize_instance(gen_synthetic(10, 0.0, 7));
  CHECK(a == b);  // byte-identical files for one (n, C, seed)
  CHECK(serialize_instance(gen_synthetic(10, 0.0, 8)) != a);
  CHECK(serialize_instance(gen_synthetic(11, 0.0, 7)) != a);

  Instance inst = gen_synthetic(10, 2.5, 42);
  CHECK(inst.weights.n == 10);
  CHECK(inst.weights.alphabet.size() == 2);
  // 16 length-4 words plus the cost-free wrap word.
  REQUIRE(inst.weights.vocabulary.size() == 17);
  CHECK(inst.weights.alphabet.to_string(inst.weights.vocabulary[0]) == "0000");
  CHECK(inst.weights.alphabet.to_string(inst.weights.vocabulary[15]) == "1111");
  CHECK(inst.weights.alphabet.to_string(inst.weights.vocabulary[16]) == "11");
  // One cost per placement of each length-4 word; none for the wrap word.
  CHECK(inst.weights.cost.size() == 16u * 7u);
  for (const auto& [key, c] : inst.weights.cost) {
    CHECK(key.first < 16);
    CHECK(c >= 0.0);
    CHECK(c < 1.0);
  }

  REQUIRE(!inst.is_cnf());
  const InteractionGrammar& ig = inst.interaction();
  CHECK(ig.depth == 2);
  REQUIRE(ig.pairs.size() == 1);
  CHECK(inst.weights.alphabet.to_string(ig.pairs[0].left) == "11");
  CHECK(inst.weights.alphabet.to_string(ig.pairs[0].right) == "11");
  REQUIRE(ig.pairs[0].theta.size() == 2);
  for (const WeightSpec& th : ig.pairs[0].theta) {
    CHECK(th.kind() == WeightSpec::Kind::Table);
    CHECK(th.positions() == 10);
    for (const auto& row : th.rows())
      for (double v : row) {
        CHECK(v >= 0.0);
        CHECK(v < 2.5);
      }
  }

  // The generated file parses back to the identical instance.
  CHECK(parse_instance_text(serialize_instance(inst)) == inst);
}

TEST_CASE("C = 0 zeroes every rule weight") {
  Instance inst = gen_synthetic(8, 0.0, 3);
  for (const WeightSpec& th : inst.interaction().pairs[0].theta)
    for (const auto& row : th.rows())
      for (double v : row) CHECK(v == 0.0);
}

TEST_CASE("generator rejects bad parameters") {
  CHECK_THROWS_AS(gen_synthetic(0, 1.0, 1), InputError);
  CHECK_THROWS_AS(gen_synthetic(5, -1.0, 1), InputError);
}

TEST_CASE("small generated instances match the brute-force oracle") {
  struct Point {
    int n;
    double C;
    std::uint64_t seed;
  };
  for (Point p : {Point{7, 1.0, 1}, Point{6, 10.0, 3}, Point{5, 0.0, 2}, Point{4, 0.5, 9}}) {
    CAPTURE(p.n);
    CAPTURE(p.seed);
    Instance inst = gen_synthetic(p.n, p.C, p.seed);
    BruteResult want = brute_min(inst);

    PatternWeights pw = normalize_terminal_words(inst.weights, inst.interaction());
    PatternIndex index(pw);
    CostTables tables = compute_cost_tables(index, pw);
    for (ApspBackend backend : {ApspBackend::Reference, ApspBackend::UsefulEdge}) {
      double got = interaction_min(index, tables, inst.interaction(), backend);
      CHECK(close(got, want.value));
    }
    InteractionArgmin am =
        interaction_argmin(index, tables, inst.interaction(), ApspBackend::UsefulEdge);
    CHECK(close(am.value, want.value));
    CHECK(close(score_labeling(pw, inst.effective_cnf(), am.labeling), want.value));
  }
}

TEST_CASE("exponent fit recovers constructed power laws") {
  // Exact quadratic: t = 3 n^2.
  std::vector<std::pair<double, double>> quad;
  for (double n : {50.0, 100.0, 150.0, 200.0, 300.0}) quad.push_back({n, 3.0 * n * n});
  ExponentFit fit = fit_exponent(quad);
  CHECK(std::abs(fit.exponent - 2.0) < 1e-9);
  CHECK(std::abs(fit.log_scale - std::log(3.0)) < 1e-9);
  CHECK(fit.rms_residual < 1e-12);
  CHECK(fit.points == 5);

  // Deterministic wiggle around n^2.5 stays within a loose band.
  std::vector<std::pair<double, double>> noisy;
  int k = 0;
  for (double n : {100.0, 150.0, 200.0, 250.0, 300.0, 350.0})
    noisy.push_back({n, std::pow(n, 2.5) * (1.0 + 0.05 * ((k++ % 2 == 0) ? 1.0 : -1.0))});
  ExponentFit nf = fit_exponent(noisy);
  CHECK(std::abs(nf.exponent - 2.5) < 0.1);
  CHECK(nf.rms_residual < 0.1);

  CHECK_THROWS_AS(fit_exponent({{100.0, 1.0}}), InputError);
  CHECK_THROWS_AS(fit_exponent({{100.0, 1.0}, {200.0, 0.0}}), InputError);
  CHECK_THROWS_AS(fit_exponent({{100.0, 1.0}, {100.0, 2.0}}), InputError);
}

TEST_CASE("bench harness emits one row per configuration plus CSV and summary") {
  BenchConfig config;
  config.n_min = 8;
  config.n_max = 12;
  config.n_step = 2;
  config.c_list = {0.0, 1.0};
  config.seeds = {1};
  config.backend = ApspBackend::UsefulEdge;
  config.fit_lo = 8;
  config.fit_hi = 12;

  std::ostringstream progress;
  std::vector<BenchRow> rows = run_bench(config, &progress);
  REQUIRE(rows.size() == 6);  // 3 n values x 2 C values x 1 seed
  for (const BenchRow& r : rows) {
    CHECK(r.algorithm == "interaction");
    CHECK(r.backend == std::string("useful-edge"));
    CHECK(r.wall_seconds >= 0.0);
  }
  CHECK(rows[0].n == 8);
  CHECK(rows[5].n == 12);
  CHECK(progress.str().find("n=8") != std::string::npos);

  const std::string csv = bench_csv(rows);
  CHECK(csv.rfind("algorithm,backend,n,C,seed,wall_seconds\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);  // header + 6 rows
  CHECK(csv.find("interaction,useful-edge,8,0,1,") != std::string::npos);

  const std::string summary = bench_summary(rows, config.fit_lo, config.fit_hi);
  CHECK(summary.find("exponent") != std::string::npos);
  CHECK(summary.find("C=1") != std::string::npos);

  CHECK(bench_summary(rows, 1000.0, 2000.0).find("no timing points") != std::string::npos);

  BenchConfig bad = config;
  bad.n_step = 0;
  CHECK_THROWS_AS(run_bench(bad), InputError);
}
