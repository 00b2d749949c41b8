// End-to-end tests of the command-line binary: output forms, exit codes,
// oracle checking, generation determinism, and the bench subcommand.  The
// binary is located via the PGI_BIN environment variable, defaulting to
// "./pgi" (the ctest working directory is the build tree).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "pgi/bench.hpp"
#include "pgi/io.hpp"
#include "support.hpp"

using namespace pgi;
using namespace pgi::test;
using doctest::Contains;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

struct RunResult {
  int code = -1;
  std::string out, err;
};

RunResult run(const std::string& args) {
  const char* env = std::getenv("PGI_BIN");
  const std::string bin = env ? env : "./pgi";
  const std::string cmd = bin + " " + args + " > cli_stdout.tmp 2> cli_stderr.tmp";
  const int rc = std::system(cmd.c_str());
  RunResult r;
  r.code = rc == -1 ? -1 : WEXITSTATUS(rc);
  r.out = slurp("cli_stdout.tmp");
  r.err = slurp("cli_stderr.tmp");
  std::remove("cli_stdout.tmp");
  std::remove("cli_stderr.tmp");
  return r;
}

const char* kCnfExample = R"({
  "n": 2,
  "alphabet": ["a", "b"],
  "patterns": [{"word": "ab", "cost": -1}],
  "grammar": {
    "kind": "cnf",
    "nonterminals": ["S"],
    "start": "S",
    "rules": [{"head": "S", "word": "ab", "weight": 0}]
  }
})";

const char* kDepth1Example = R"({
  "n": 4,
  "alphabet": ["a", "b"],
  "patterns": [{"word": "a", "cost": 0.5}, {"word": "ab"}],
  "grammar": {
    "kind": "interaction",
    "depth": 1,
    "pairs": [{"left": "a", "right": "ab", "weights": [-2]}]
  }
})";

}  // namespace

TEST_CASE("solve prints the minimum, labeling, derivation, and oracle verdict") {
  spit("cli_case.json", kCnfExample);
  RunResult r = run("solve --instance cli_case.json --oracle-check");
  CHECK(r.code == 0);
  CHECK_MESSAGE(r.out.find("M = -1\n") != std::string::npos, r.out);
  CHECK(r.out.find("labeling: ab") != std::string::npos);
  CHECK(r.out.find("derivation: (S ab)") != std::string::npos);
  CHECK(r.out.find("oracle check: match") != std::string::npos);
  // Timing never lands on stdout.
  CHECK(r.out.find("seconds") == std::string::npos);
  CHECK(r.err.find("solve seconds:") != std::string::npos);
  std::remove("cli_case.json");
}

TEST_CASE("machine-readable output is parseable, complete, and byte-stable") {
  spit("cli_case.json", kCnfExample);
  RunResult a = run("solve --instance cli_case.json --output machine-readable --oracle-check");
  RunResult b = run("solve --instance cli_case.json --output machine-readable --oracle-check");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);  // stable across runs: no timing in machine output

  nlohmann::json j = nlohmann::json::parse(a.out);
  CHECK(j.at("algorithm") == "general");
  CHECK(j.at("backend") == "useful-edge");
  CHECK(j.at("objective") == "min");
  CHECK(j.at("value").get<double>() == -1.0);
  CHECK(j.at("labeling") == "ab");
  CHECK(j.at("oracle") == "match");
  std::remove("cli_case.json");
}

TEST_CASE("logZ objective runs on the general path and matches the oracle") {
  spit("cli_case.json", kCnfExample);
  RunResult r = run("solve --instance cli_case.json --objective logZ --oracle-check --output machine-readable");
  CHECK(r.code == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j.at("objective") == "logZ");
  CHECK(j.at("oracle") == "match");
  CHECK(std::isfinite(j.at("value").get<double>()));

  RunResult bad = run("solve --instance cli_case.json --objective logZ --algorithm interaction");
  CHECK(bad.code == 2);
  CHECK(bad.err.find("logZ") != std::string::npos);
  std::remove("cli_case.json");
}

TEST_CASE("gen is deterministic and byte-identical to the library serializer") {
  RunResult a = run("gen --n 9 --C 1.5 --seed 11");
  RunResult b = run("gen --n 9 --C 1.5 --seed 11");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == serialize_instance(gen_synthetic(9, 1.5, 11)));
}

TEST_CASE("all four algorithms agree through the CLI") {
  // Depth-2 synthetic instance: interaction vs general (compiled grammar).
  RunResult g = run("gen --n 7 --C 1 --seed 1 --out cli_synth.json");
  REQUIRE(g.code == 0);
  RunResult it = run("solve --instance cli_synth.json --algorithm interaction "
                     "--oracle-check --output machine-readable");
  CHECK(it.code == 0);
  nlohmann::json ji = nlohmann::json::parse(it.out);
  CHECK(ji.at("oracle") == "match");
  RunResult gen_alg = run("solve --instance cli_synth.json --algorithm general "
                          "--output machine-readable");
  CHECK(gen_alg.code == 0);
  nlohmann::json jg = nlohmann::json::parse(gen_alg.out);
  CHECK(close(ji.at("value").get<double>(), jg.at("value").get<double>()));

  // The depth-1 algorithms refuse depth-2 input.
  RunResult d1_refuse = run("solve --instance cli_synth.json --algorithm d1");
  CHECK(d1_refuse.code == 2);
  CHECK(d1_refuse.err.find("depth 1") != std::string::npos);
  std::remove("cli_synth.json");

  // Depth-1 instance: every algorithm returns the same minimum.
  spit("cli_d1.json", kDepth1Example);
  double value = 0.0;
  bool first = true;
  for (const char* alg : {"general", "interaction", "d1", "earley-d1"}) {
    CAPTURE(alg);
    RunResult r = run(std::string("solve --instance cli_d1.json --algorithm ") + alg +
                      " --oracle-check --output machine-readable");
    CHECK(r.code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j.at("oracle") == "match");
    const double v = j.at("value").get<double>();
    if (first) {
      value = v;
      first = false;
    } else {
      CHECK(close(v, value));
    }
    // Value-only algorithms print no labeling; argmin algorithms print both.
    const bool has_witness = std::string(alg) == "general" || std::string(alg) == "interaction";
    CHECK(j.contains("labeling") == has_witness);
    CHECK(j.contains("derivation") == has_witness);
  }
  std::remove("cli_d1.json");
}

TEST_CASE("exit codes: invalid input is 2, size refusal is 3") {
  spit("cli_bad.json", "not json");
  RunResult bad = run("solve --instance cli_bad.json");
  CHECK(bad.code == 2);
  CHECK(bad.err.find("invalid input:") != std::string::npos);
  CHECK(bad.err.find("line 1") != std::string::npos);
  std::remove("cli_bad.json");

  RunResult missing = run("solve --instance definitely_absent.json");
  CHECK(missing.code == 2);
  CHECK(missing.err.find("cannot open") != std::string::npos);

  spit("cli_case.json", kCnfExample);
  RunResult badalg = run("solve --instance cli_case.json --algorithm quantum");
  CHECK(badalg.code == 2);
  CHECK(badalg.err.find("unknown algorithm") != std::string::npos);

  RunResult badflag = run("solve --instance cli_case.json --frobnicate");
  CHECK(badflag.code == 2);

  RunResult nosub = run("");
  CHECK(nosub.code == 2);

  RunResult help = run("--help");
  CHECK(help.code == 0);
  CHECK(help.out.find("solve") != std::string::npos);
  std::remove("cli_case.json");

  // Oracle refusal past the enumeration cap: 2^21 assignments.
  RunResult g = run("gen --n 21 --C 1 --seed 2 --out cli_big.json");
  REQUIRE(g.code == 0);
  RunResult refuse = run("solve --instance cli_big.json --algorithm interaction --oracle-check");
  CHECK(refuse.code == 3);
  CHECK(refuse.err.find("size refusal:") != std::string::npos);
  // Without the oracle the same instance solves fine.
  RunResult ok = run("solve --instance cli_big.json --algorithm interaction");
  CHECK(ok.code == 0);
  std::remove("cli_big.json");
}

TEST_CASE("bench subcommand emits CSV rows and a fit summary") {
  RunResult r = run("bench --n-min 8 --n-max 12 --n-step 2 --C-list 0,1 --seeds 1 "
                    "--fit-range 8,12");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("algorithm,backend,n,C,seed,wall_seconds\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 7);  // header + 3 n x 2 C
  CHECK(r.err.find("exponent") != std::string::npos);

  RunResult to_file = run("bench --n-min 8 --n-max 8 --n-step 1 --C-list 1 --seeds 1 "
                          "--fit-range 8,8 --out cli_bench.csv");
  CHECK(to_file.code == 0);
  CHECK(to_file.out.empty());
  CHECK(slurp("cli_bench.csv").rfind("algorithm,", 0) == 0);
  std::remove("cli_bench.csv");

  RunResult bad = run("bench --n-min 8 --n-max 12 --C-list 0,abc");
  CHECK(bad.code == 2);
  CHECK(bad.err.find("cannot parse number") != std::string::npos);
}
