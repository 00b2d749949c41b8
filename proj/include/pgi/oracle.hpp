// Independent reference implementations used to validate the optimized code
// paths.  Everything here favors directness over speed: set-based pattern
// enumeration, quadratic suffix scans, exhaustive assignment enumeration.
// Exhaustive oracles refuse (SizeRefusal) beyond documented caps instead of
// silently running forever.

#pragma once

#include <map>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "pgi/grammar.hpp"
#include "pgi/pattern.hpp"

namespace pgi {

// A full problem instance: pattern weights plus a grammar of either kind.
struct Instance {
  PatternWeights weights;
  std::variant<CnfGrammar, InteractionGrammar> grammar;

  bool is_cnf() const { return std::holds_alternative<CnfGrammar>(grammar); }
  const CnfGrammar& cnf() const { return std::get<CnfGrammar>(grammar); }
  const InteractionGrammar& interaction() const { return std::get<InteractionGrammar>(grammar); }

  // The extended-CNF grammar general inference runs on: the CNF itself, or
  // the compiled interaction system.
  CnfGrammar effective_cnf() const {
    return is_cnf() ? cnf() : compile_interaction_grammar(interaction(), weights.alphabet);
  }

  bool operator==(const Instance&) const = default;
};

inline constexpr std::size_t kBruteAssignmentCap = 1'000'000;
inline constexpr std::size_t kBruteDerivationCap = 10'000;

// Pi as explicit (start, word) pairs, from the definitions: all placements of
// vocabulary words, their prefixes kept only when some full word starting at
// the same position fits, plus all empty patterns.
std::set<std::pair<int, Word>> naive_pattern_set(const PatternWeights& weights);

// Longest suffix of alpha lying in Pi, by scanning suffixes longest-first.
Pattern naive_lsp(const PatternWeights& weights, const Pattern& alpha);

// Suffix-forest edges (parent, child) per end position, as patterns.
std::vector<std::pair<Pattern, Pattern>> naive_forest_edges(const PatternWeights& weights, int s);

// phi and f for one pattern by direct summation over Pi_deg placements.
double naive_phi(const PatternWeights& weights, const Pattern& alpha);
double naive_f_pattern(const PatternWeights& weights, const Pattern& alpha);

// f(x) for a full-length assignment: sum of costs of Pi_deg members contained
// in x (x is scanned directly; no index involved).
double naive_f(const PatternWeights& weights, const Word& x);

// Exhaustive minimum of f(x) + least-derivation cost over all |D|^n
// assignments; ties resolved to the lexicographically smallest x (label-id
// order).  Throws SizeRefusal when |D|^n exceeds kBruteAssignmentCap.
struct BruteResult {
  double value = kInf;
  Word argmin;  // empty when value is kInf and n > 0
};
BruteResult brute_min(const Instance& inst);

// Exhaustive log partition: log sum over x and over every derivation lambda of
// exp(-f(x) - cost(lambda)), via derivation enumeration.  Throws SizeRefusal
// beyond kBruteAssignmentCap assignments or kBruteDerivationCap derivations
// per assignment.
double brute_logZ(const Instance& inst);

// Scores a single labeling: f(x) plus its grammar cost.  With a certificate
// derivation the grammar cost is the certificate's weight (the certificate is
// validated against g and x first, throwing InputError if it does not check
// out); without one it is the least-derivation cost from the parsing chart.
double score_labeling(const PatternWeights& weights, const CnfGrammar& g, const Word& x,
                      const Derivation* certificate = nullptr);

}  // namespace pgi
