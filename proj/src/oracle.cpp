// Reference implementations: definition-level pattern enumeration and direct
// cost summation.

#include "pgi/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace pgi {

namespace {

bool is_suffix(const Word& suf, const Word& w) {
  if (suf.size() > w.size()) return false;
  return std::equal(suf.rbegin(), suf.rend(), w.rbegin());
}

}  // namespace

std::set<std::pair<int, Word>> naive_pattern_set(const PatternWeights& weights) {
  std::set<std::pair<int, Word>> pi;
  for (int s = 0; s <= weights.n; ++s) pi.insert({s + 1, Word{}});
  for (const Word& w : weights.vocabulary) {
    int len = static_cast<int>(w.size());
    for (int i = 1; i + len - 1 <= weights.n; ++i) {
      // Full placement and all its prefixes anchored at i.
      for (int p = 1; p <= len; ++p) pi.insert({i, Word(w.begin(), w.begin() + p)});
    }
  }
  return pi;
}

Pattern naive_lsp(const PatternWeights& weights, const Pattern& alpha) {
  if (alpha.start < 1 || alpha.end > weights.n) throw InputError("pattern does not fit within [1,n]");
  auto pi = naive_pattern_set(weights);
  for (int len = alpha.len(); len >= 0; --len) {
    Word suf(alpha.word.end() - len, alpha.word.end());
    int start = alpha.end - len + 1;
    if (pi.count({start, suf})) return Pattern{start, alpha.end, suf};
  }
  throw std::logic_error("empty pattern missing from Pi");
}

std::vector<std::pair<Pattern, Pattern>> naive_forest_edges(const PatternWeights& weights, int s) {
  auto pi = naive_pattern_set(weights);
  std::vector<Pattern> at_s;
  for (const auto& [start, w] : pi) {
    int end = start + static_cast<int>(w.size()) - 1;
    if (end == s && !w.empty()) at_s.push_back(Pattern{start, end, w});
  }
  std::vector<std::pair<Pattern, Pattern>> edges;
  for (const Pattern& child : at_s) {
    // Parent: the longest proper suffix of child present at s (possibly empty).
    Pattern parent = empty_pattern_at(s);
    for (const Pattern& cand : at_s) {
      if (cand.len() >= child.len()) continue;
      if (!is_suffix(cand.word, child.word)) continue;
      if (cand.len() > parent.len()) parent = cand;
    }
    edges.push_back({parent, child});
  }
  return edges;
}

double naive_phi(const PatternWeights& weights, const Pattern& alpha) {
  if (alpha.start < 1 || alpha.end > weights.n) throw InputError("pattern does not fit within [1,n]");
  double total = 0.0;
  for (std::size_t vi = 0; vi < weights.vocabulary.size(); ++vi) {
    const Word& w = weights.vocabulary[vi];
    if (!is_suffix(w, alpha.word)) continue;
    int start = alpha.end - static_cast<int>(w.size()) + 1;
    if (start >= 1) total += weights.placement_cost(static_cast<int>(vi), start);
  }
  return total;
}

double naive_f_pattern(const PatternWeights& weights, const Pattern& alpha) {
  if (alpha.start < 1 || alpha.end > weights.n) throw InputError("pattern does not fit within [1,n]");
  double total = 0.0;
  for (std::size_t vi = 0; vi < weights.vocabulary.size(); ++vi) {
    const Word& w = weights.vocabulary[vi];
    int len = static_cast<int>(w.size());
    for (int i = alpha.start; i + len - 1 <= alpha.end; ++i) {
      if (std::equal(w.begin(), w.end(), alpha.word.begin() + (i - alpha.start)))
        total += weights.placement_cost(static_cast<int>(vi), i);
    }
  }
  return total;
}

double naive_f(const PatternWeights& weights, const Word& x) {
  if (static_cast<int>(x.size()) != weights.n) throw InputError("assignment length differs from n");
  Pattern whole{1, weights.n, x};
  return naive_f_pattern(weights, whole);
}

namespace {

// Enumerates all assignments in lexicographic label order, calling visit(x).
template <typename Visit>
void for_each_assignment(int n, int d, Visit&& visit) {
  double total = std::pow(static_cast<double>(d), n);
  if (total > static_cast<double>(kBruteAssignmentCap))
    throw SizeRefusal("assignment space |D|^n exceeds the exhaustive cap of " +
                      std::to_string(kBruteAssignmentCap));
  Word x(n, 0);
  while (true) {
    visit(const_cast<const Word&>(x));
    int p = n - 1;
    while (p >= 0 && x[p] == d - 1) x[p--] = 0;
    if (p < 0) break;
    ++x[p];
  }
}

}  // namespace

BruteResult brute_min(const Instance& inst) {
  inst.weights.validate();
  CnfGrammar g = inst.effective_cnf();
  BruteResult best;
  for_each_assignment(inst.weights.n, inst.weights.alphabet.size(), [&](const Word& x) {
    double e = naive_f(inst.weights, x) + cyk_min_parse(x, g);
    if (e < best.value) {
      best.value = e;
      best.argmin = x;
    }
  });
  return best;
}

double score_labeling(const PatternWeights& weights, const CnfGrammar& g, const Word& x,
                      const Derivation* certificate) {
  double fx = naive_f(weights, x);
  if (certificate == nullptr) return fx + cyk_min_parse(x, g);
  std::string why;
  if (!check_derivation(*certificate, g, x, &why))
    throw InputError("certificate derivation does not check out: " + why);
  return fx + certificate->total_weight();
}

double brute_logZ(const Instance& inst) {
  inst.weights.validate();
  CnfGrammar g = inst.effective_cnf();
  std::vector<double> terms;  // log mass per assignment
  for_each_assignment(inst.weights.n, inst.weights.alphabet.size(), [&](const Word& x) {
    double fx = naive_f(inst.weights, x);
    for (const Derivation& lambda : enumerate_derivations(x, g, kBruteDerivationCap))
      terms.push_back(-fx - lambda.total_weight());
  });
  double hi = -kInf;
  for (double t : terms) hi = std::max(hi, t);
  if (hi == -kInf) return -kInf;
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - hi);
  return hi + std::log(acc);
}

}  // namespace pgi
