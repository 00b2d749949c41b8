// Exact inference over pattern energies combined with a grammar cost.
//
// The solver runs a span recursion over pairs of context patterns: for every
// nonterminal A it fills a table M_A(alpha, beta) holding the best (or
// aggregated, depending on the algebra) value over subtrees rooted at A that
// realize the positions (end(alpha), end(beta)], given that the text to the
// left of the span is summarized by the context pattern alpha and that the
// resulting context at end(beta) is beta.  Values include both the rule
// weights of the subtree and the pattern placements contained in
// [start(alpha), end(beta)].  Terminal rules extend a context by a whole word
// via the precomputed extension tables; binary rules join two spans through a
// mid context gamma, subtracting the placements inside gamma that both sides
// account for.  The total over the whole line is read off the row of the
// empty context at position 0.
//
// The same recursion instantiated with the Tropical / LogSum / MaxProd
// algebras yields the minimum energy, the log partition function, and the
// maximum probability mass.  An exact labeling and derivation witness is
// recovered from the Tropical chart by a deterministic re-search that relies
// on the chart arithmetic being bit-reproducible.

#pragma once

#include <vector>

#include "pgi/algebra.hpp"
#include "pgi/grammar.hpp"
#include "pgi/pattern.hpp"
#include "pgi/tri.hpp"

namespace pgi {

// A grammar whose terminal words have been resolved to nodes of the pattern
// trie.  Binding requires every terminal word to be a prefix of some
// vocabulary word; normalize_terminal_words() augments an instance so this
// always holds.
struct BoundGrammar {
  CnfGrammar grammar;
  std::vector<int> terminal_node;  // per terminal rule: trie node of its word

  static BoundGrammar bind(const PatternIndex& index, CnfGrammar grammar);
};

// Chart of the span recursion: one triangular table per nonterminal plus the
// aggregated total.  `value` aggregates F(x) = f(x) + grammar cost over all
// labelings x (minimum / log-sum / max of exp(-F) depending on the algebra).
template <class A>
struct SpanChart {
  using Value = typename A::Value;
  Value value = A::zero();
  std::vector<TriMatrix<Value>> tables;  // indexed by nonterminal id
};

template <class A>
SpanChart<A> compute_span_chart(const PatternIndex& index, const CostTables& tables,
                                const BoundGrammar& bound, Counters* counters = nullptr);

extern template SpanChart<Tropical> compute_span_chart<Tropical>(const PatternIndex&,
                                                                 const CostTables&,
                                                                 const BoundGrammar&, Counters*);
extern template SpanChart<LogSum> compute_span_chart<LogSum>(const PatternIndex&,
                                                             const CostTables&,
                                                             const BoundGrammar&, Counters*);
extern template SpanChart<MaxProd> compute_span_chart<MaxProd>(const PatternIndex&,
                                                               const CostTables&,
                                                               const BoundGrammar&, Counters*);

// An optimal labeling together with its witness derivation.  When no labeling
// has finite energy, `value` is +infinity and both `labeling` and
// `derivation` are empty.
struct ArgminResult {
  double value = kInf;
  Word labeling;
  Derivation derivation;
};

// Recovers one minimizer from a Tropical chart by deterministically re-walking
// the recursion (first witness in table order).  The derivation is expressed
// over `bound.grammar` and always passes check_derivation against `labeling`.
ArgminResult extract_argmin(const PatternIndex& index, const CostTables& tables,
                            const BoundGrammar& bound, const SpanChart<Tropical>& chart);

}  // namespace pgi
