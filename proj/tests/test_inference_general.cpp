#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pgi/inference.hpp"
#include "pgi/oracle.hpp"
#include "support.hpp"

using namespace pgi;
using namespace pgi::test;

namespace {

struct Prepared {
  PatternWeights weights;
  CnfGrammar grammar;
  PatternIndex index;
  CostTables tables;
  BoundGrammar bound;
  Counters counters;

  Prepared(PatternWeights pw, const CnfGrammar& g)
      : weights(normalize_terminal_words(std::move(pw), g)),
        grammar(g),
        index(weights),
        tables(compute_cost_tables(index, weights)),
        bound(BoundGrammar::bind(index, g)) {}
};

}  // namespace

TEST_CASE("minimum energy and witness match exhaustive search on random instances") {
  int checked = 0;
  for (int t = 0; t < 400; ++t) {
    Rand r(0x91E000 + t);
    bool integer = (t % 2 == 0);
    PatternWeights pw = random_weights(r, 6, 2, 4, 3, integer);
    CnfGrammar g = random_cnf(r, pw.alphabet, 3, 7, 3, integer, pw.n);
    Prepared p(std::move(pw), g);
    auto chart = compute_span_chart<Tropical>(p.index, p.tables, p.bound, &p.counters);

    Instance inst;
    inst.weights = p.weights;
    inst.grammar = g;
    BruteResult brute = brute_min(inst);
    CAPTURE(t);
    ++checked;
    if (integer) {
      CHECK(chart.value == brute.value);
    } else {
      CHECK(close(chart.value, brute.value));
    }

    ArgminResult best = extract_argmin(p.index, p.tables, p.bound, chart);
    CHECK(best.value == chart.value);
    if (chart.value == kInf) {
      CHECK(best.labeling.empty());
      CHECK(best.derivation.empty());
      continue;
    }
    REQUIRE(static_cast<int>(best.labeling.size()) == p.weights.n);
    // The witness re-scores to the reported minimum, both through the
    // certificate derivation and through an independent parse of the labeling.
    double certified = score_labeling(p.weights, g, best.labeling, &best.derivation);
    double reparsed = score_labeling(p.weights, g, best.labeling);
    CHECK(close(certified, chart.value, 1e-12));
    CHECK(reparsed <= certified + 1e-12 * std::max(1.0, std::abs(certified)));
    if (integer) CHECK(reparsed == brute.value);
  }
  CHECK(checked == 400);
}

TEST_CASE("compiled interaction systems solve to the exhaustive minimum") {
  int checked = 0;
  for (int t = 0; t < 150; ++t) {
    Rand r(0xA11CE5 + t);
    bool integer = (t % 2 == 0);
    PatternWeights pw = random_weights(r, 6, 2, 3, 3, integer);
    InteractionGrammar ig = random_interaction(r, pw.alphabet, 2, 2, 2, integer, pw.n);
    CnfGrammar g = compile_interaction_grammar(ig, pw.alphabet);
    Prepared p(std::move(pw), g);
    auto chart = compute_span_chart<Tropical>(p.index, p.tables, p.bound, &p.counters);

    Instance inst;
    inst.weights = p.weights;
    inst.grammar = ig;
    BruteResult brute = brute_min(inst);
    CAPTURE(t);
    ++checked;
    if (integer) {
      CHECK(chart.value == brute.value);
    } else {
      CHECK(close(chart.value, brute.value));
    }

    ArgminResult best = extract_argmin(p.index, p.tables, p.bound, chart);
    if (chart.value < kInf) {
      double certified = score_labeling(p.weights, g, best.labeling, &best.derivation);
      CHECK(close(certified, chart.value, 1e-12));
    }
  }
  CHECK(checked == 150);
}

TEST_CASE("log partition agrees with exhaustive derivation summation") {
  int checked = 0;
  for (int t = 0; t < 250 && checked < 150; ++t) {
    Rand r(0x10652 + t);
    PatternWeights pw = random_weights(r, 5, 2, 3, 3, false);
    CnfGrammar g = random_cnf(r, pw.alphabet, 3, 6, 2, false, pw.n);
    Prepared p(std::move(pw), g);

    Instance inst;
    inst.weights = p.weights;
    inst.grammar = g;
    double brute;
    try {
      brute = brute_logZ(inst);
    } catch (const SizeRefusal&) {
      continue;  // unbounded derivation count for some assignment
    }
    ++checked;
    auto chart = compute_span_chart<LogSum>(p.index, p.tables, p.bound);
    CAPTURE(t);
    CHECK(close(chart.value, brute));
  }
  CHECK(checked >= 150);
}

TEST_CASE("the three algebras are mutually consistent") {
  for (int t = 0; t < 80; ++t) {
    Rand r(0x3A1B0 + t);
    PatternWeights pw = random_weights(r, 6, 2, 4, 3, false);
    CnfGrammar g = random_cnf(r, pw.alphabet, 3, 7, 3, false, pw.n);
    Prepared p(std::move(pw), g);
    double mn = compute_span_chart<Tropical>(p.index, p.tables, p.bound).value;
    double lz = compute_span_chart<LogSum>(p.index, p.tables, p.bound).value;
    double mp = compute_span_chart<MaxProd>(p.index, p.tables, p.bound).value;
    CAPTURE(t);
    // Max mass is exp(-min energy), and the partition sum dominates it.
    CHECK(close(mp, std::exp(-mn), 1e-9));
    CHECK(lz >= -mn - 1e-9 * std::max(1.0, std::abs(mn)));
  }
}

TEST_CASE("empty-line instances use the epsilon rule") {
  Alphabet ab = make_alphabet("ab");
  PatternWeights pw;
  pw.n = 0;
  pw.alphabet = ab;

  RawGrammar raw;
  raw.nonterminals = {"S"};
  raw.start = "S";
  RawRule eps;
  eps.head = "S";
  eps.epsilon = true;
  eps.weight = WeightSpec::scalar(2.25);
  raw.rules.push_back(eps);
  RawRule word;
  word.head = "S";
  word.word = "a";
  raw.rules.push_back(word);
  CnfGrammar g = bind_grammar(raw, ab);

  PatternWeights norm = normalize_terminal_words(pw, g);
  PatternIndex ix(norm);
  CostTables ct = compute_cost_tables(ix, norm);
  BoundGrammar bg = BoundGrammar::bind(ix, g);
  auto chart = compute_span_chart<Tropical>(ix, ct, bg);
  CHECK(chart.value == 2.25);
  ArgminResult best = extract_argmin(ix, ct, bg, chart);
  CHECK(best.value == 2.25);
  CHECK(best.labeling.empty());
  REQUIRE(best.derivation.nodes.size() == 1);
  CHECK(best.derivation.nodes[0].kind == Derivation::Node::Kind::Epsilon);
  CHECK(check_derivation(best.derivation, g, Word{}));
  CHECK(close(compute_span_chart<LogSum>(ix, ct, bg).value, -2.25));

  // Without an epsilon rule nothing derives the empty line.
  RawGrammar raw2;
  raw2.nonterminals = {"S"};
  raw2.start = "S";
  raw2.rules.push_back(word);
  CnfGrammar g2 = bind_grammar(raw2, ab);
  PatternWeights norm2 = normalize_terminal_words(pw, g2);
  PatternIndex ix2(norm2);
  CostTables ct2 = compute_cost_tables(ix2, norm2);
  BoundGrammar bg2 = BoundGrammar::bind(ix2, g2);
  auto chart2 = compute_span_chart<Tropical>(ix2, ct2, bg2);
  CHECK(chart2.value == kInf);
  ArgminResult none = extract_argmin(ix2, ct2, bg2, chart2);
  CHECK(none.value == kInf);
  CHECK(none.derivation.empty());
}

TEST_CASE("join work stays within the cubic pair bound") {
  for (int t = 0; t < 40; ++t) {
    Rand r(0xB0B0 + t);
    PatternWeights pw = random_weights(r, 7, 2, 4, 3, true);
    CnfGrammar g = random_cnf(r, pw.alphabet, 3, 8, 3, true, pw.n);
    Prepared p(std::move(pw), g);
    compute_span_chart<Tropical>(p.index, p.tables, p.bound, &p.counters);
    auto P = static_cast<unsigned long long>(p.index.count());
    auto R = static_cast<unsigned long long>(g.rule_count());
    CAPTURE(t);
    CHECK(p.counters.binary_inner <= 2 * R * P * P * P);
  }
}

TEST_CASE("binding rejects words outside the indexed vocabulary") {
  Alphabet ab = make_alphabet("ab");
  PatternWeights pw;
  pw.n = 3;
  pw.alphabet = ab;
  pw.vocabulary = {wfs(ab, "ab")};
  pw.cost[{0, 1}] = 1.0;

  RawGrammar raw;
  raw.nonterminals = {"S"};
  raw.start = "S";
  RawRule rule;
  rule.head = "S";
  rule.word = "ba";  // not a prefix of "ab"
  raw.rules.push_back(rule);
  CnfGrammar g = bind_grammar(raw, ab);

  PatternIndex bare(pw);
  CHECK_THROWS_AS(BoundGrammar::bind(bare, g), InputError);

  // "a" is a strict prefix of a vocabulary word: already covered, no
  // augmentation required.
  RawGrammar raw2 = raw;
  raw2.rules[0].word = "a";
  CnfGrammar g2 = bind_grammar(raw2, ab);
  CHECK_NOTHROW(BoundGrammar::bind(bare, g2));

  PatternWeights fixed = normalize_terminal_words(pw, g);
  PatternIndex ix(fixed);
  CHECK_NOTHROW(BoundGrammar::bind(ix, g));
  CHECK(fixed.vocabulary.size() == 2);
}
