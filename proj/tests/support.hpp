// Shared helpers for the test suites: compact constructors and seeded random
// instance generators.  All randomness uses fixed seeds so the suite is
// deterministic.

#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "pgi/grammar.hpp"
#include "pgi/pattern.hpp"

namespace pgi::test {

inline Alphabet make_alphabet(const std::string& chars) {
  std::vector<std::string> labels;
  for (char c : chars) labels.emplace_back(1, c);
  return Alphabet(labels);
}

inline Word wfs(const Alphabet& a, const std::string& s) { return a.word_from_string(s); }

inline Pattern placed(const Alphabet& a, const std::string& s, int start) {
  Word w = a.word_from_string(s);
  return Pattern{start, start + static_cast<int>(w.size()) - 1, w};
}

// Uniform helpers over a seeded engine.
struct Rand {
  std::mt19937_64 eng;
  explicit Rand(std::uint64_t seed) : eng(seed) {}
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); }
  bool chance(double p) { return uniform(0.0, 1.0) < p; }
};

inline Word random_word(Rand& r, int alphabet_size, int len) {
  Word w(len);
  for (auto& a : w) a = static_cast<Label>(r.uniform_int(0, alphabet_size - 1));
  return w;
}

// Random vocabulary-with-costs instance.  Integer costs when integer_costs is
// set (drawn from [-5,5]), otherwise uniform [-2,2].  Roughly half of all
// placements get explicit cost entries; the rest default to 0.
inline PatternWeights random_weights(Rand& r, int max_n, int max_alphabet, int max_words,
                                     int max_len, bool integer_costs) {
  PatternWeights pw;
  pw.n = r.uniform_int(0, max_n);
  int d = r.uniform_int(1, max_alphabet);
  std::string chars = "abcxyz";
  pw.alphabet = make_alphabet(chars.substr(0, d));
  int words = r.uniform_int(0, max_words);
  for (int k = 0; k < words; ++k) {
    Word w = random_word(r, d, r.uniform_int(1, max_len));
    if (pw.find_word(w) >= 0) continue;
    pw.vocabulary.push_back(w);
  }
  for (std::size_t vi = 0; vi < pw.vocabulary.size(); ++vi) {
    int len = static_cast<int>(pw.vocabulary[vi].size());
    for (int i = 1; i + len - 1 <= pw.n; ++i) {
      if (!r.chance(0.5)) continue;
      double c = integer_costs ? r.uniform_int(-5, 5) : r.uniform(-2.0, 2.0);
      pw.cost[{static_cast<int>(vi), i}] = c;
    }
  }
  return pw;
}

// Relative closeness that treats infinities as exact values (Approx does not).
inline bool close(double a, double b, double rel = 1e-9) {
  if (std::isinf(a) || std::isinf(b) || std::isnan(a) || std::isnan(b)) return a == b;
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

inline double random_scalar_weight(Rand& r, bool integer) {
  return integer ? static_cast<double>(r.uniform_int(-5, 5)) : r.uniform(-2.0, 2.0);
}

// Random position weight: mostly scalar; tables and separable parts when n > 0.
inline WeightSpec random_weight_spec(Rand& r, bool integer, int n, bool allow_table = true,
                                     bool allow_separable = true) {
  double roll = r.uniform(0.0, 1.0);
  if (n > 0 && allow_table && roll < 0.15) {
    std::vector<std::vector<double>> rows(n);
    for (int i = 1; i <= n; ++i) {
      rows[i - 1].resize(n - i + 1);
      for (double& v : rows[i - 1]) v = random_scalar_weight(r, integer);
    }
    return WeightSpec::table(std::move(rows));
  }
  if (n > 0 && allow_separable && roll < 0.3) {
    std::vector<double> sp(n), ep(n);
    for (double& v : sp) v = random_scalar_weight(r, integer);
    for (double& v : ep) v = random_scalar_weight(r, integer);
    return WeightSpec::separable(std::move(sp), std::move(ep));
  }
  if (roll > 0.95) return WeightSpec::scalar(kInf);  // occasionally disabled
  return WeightSpec::scalar(random_scalar_weight(r, integer));
}

// Random well-formed extended-CNF grammar over the alphabet.  Position
// weights (when n > 0) are sized to strings of length n.
inline CnfGrammar random_cnf(Rand& r, const Alphabet& alphabet, int max_nts, int max_rules,
                             int max_word_len, bool integer, int n) {
  RawGrammar raw;
  int nts = r.uniform_int(1, max_nts);
  for (int i = 0; i < nts; ++i) raw.nonterminals.push_back("N" + std::to_string(i));
  raw.start = "N0";
  int rules = r.uniform_int(1, max_rules);
  for (int i = 0; i < rules; ++i) {
    RawRule rule;
    rule.head = raw.nonterminals[r.uniform_int(0, nts - 1)];
    double roll = r.uniform(0.0, 1.0);
    if (roll < 0.5) {
      rule.body = {raw.nonterminals[r.uniform_int(0, nts - 1)],
                   raw.nonterminals[r.uniform_int(0, nts - 1)]};
      rule.weight = random_weight_spec(r, integer, n);
    } else if (roll < 0.95) {
      Word w = random_word(r, alphabet.size(), r.uniform_int(1, max_word_len));
      rule.word = alphabet.to_string(w);
      rule.weight = random_weight_spec(r, integer, n);
    } else {
      rule.head = raw.start;
      rule.epsilon = true;
      rule.weight = WeightSpec::scalar(random_scalar_weight(r, integer));
    }
    // At most one epsilon rule.
    if (rule.epsilon) {
      bool dup = false;
      for (const RawRule& prev : raw.rules) dup = dup || prev.epsilon;
      if (dup) continue;
    }
    raw.rules.push_back(std::move(rule));
  }
  // Guarantee some derivability: a terminal rule on the start symbol.
  RawRule fallback;
  fallback.head = raw.start;
  fallback.word = alphabet.label(0);
  fallback.weight = WeightSpec::scalar(random_scalar_weight(r, integer));
  raw.rules.push_back(std::move(fallback));
  return bind_grammar(raw, alphabet);
}

// Random interaction grammar; pair words drawn over the alphabet.
inline InteractionGrammar random_interaction(Rand& r, const Alphabet& alphabet, int max_depth,
                                             int max_pairs, int max_word_len, bool integer, int n,
                                             bool scalar_and_separable_only = false) {
  InteractionGrammar ig;
  ig.depth = r.uniform_int(1, max_depth);
  int pairs = r.uniform_int(1, max_pairs);
  for (int p = 0; p < pairs; ++p) {
    InteractionPair pr;
    pr.left = random_word(r, alphabet.size(), r.uniform_int(1, max_word_len));
    pr.right = random_word(r, alphabet.size(), r.uniform_int(1, max_word_len));
    for (int k = 1; k <= ig.depth; ++k)
      pr.theta.push_back(random_weight_spec(r, integer, n, !scalar_and_separable_only, true));
    ig.pairs.push_back(std::move(pr));
  }
  return ig;
}

}  // namespace pgi::test
