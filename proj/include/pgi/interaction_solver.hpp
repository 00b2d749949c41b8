// Exact solvers specialized to bounded-depth interaction systems.
//
// The level-k language cost of a string is: level 0 derives anything for
// free; level k may defer to level k-1, split into two level-k parts, or wrap
// a level k-1 string as u . middle . v for an interaction pair (u, v), paying
// theta_k(u, v) evaluated on the wrapped span.  The solvers minimize
// F(x) = f(x) + (level-d cost of x) without materializing the compiled
// grammar, working on message tables M_k(alpha, beta) over context-pattern
// pairs (the same span invariant as the general solver's per-nonterminal
// tables):
//
//   level 0    anchored forward scans over the pattern automaton, one per
//              left context, stepping a letter at a time (counter m0_steps);
//   vertical   level k-1 tables are wrapped with every pair: left contexts
//              absorb u, middles run the level below, right contexts absorb
//              v; an empty middle degenerates to the pair words placed
//              adjacently and is handled by a separate loop (counter
//              vertical_triples counts both outer enumerations);
//   carryover  deferring costs nothing: the level k-1 table is folded in
//              elementwise before closing;
//   horizontal concatenation closure = least paths over the block DAG with
//              edge costs M~_k(alpha, beta) - f(beta) (see apsp.hpp), then
//              M_k = dist + f(beta).
//
// Depth-1 shortcuts: the single-source variant, whose final level relaxes
// only the row of the empty context at position 0 instead of closing the
// whole table, and the one-level scan (Earley-style) variant, which runs a
// single left-to-right pass over (pattern state) x (pair progress) machine
// states and therefore accepts only scalar or separable pair weights (a
// separable weight splits into a start part paid when u begins and an end
// part paid when v completes; dense tables are rejected even if separable).
//
// All variants return the same values (exactly on integer weights, to
// rounding otherwise): see the agreement tests.

#pragma once

#include "pgi/apsp.hpp"
#include "pgi/grammar.hpp"
#include "pgi/pattern.hpp"

namespace pgi {

// Minimum of F(x) over all labelings; always finite (level-0 freedom caps the
// grammar cost at 0).  `backend` selects the closure implementation.
double interaction_min(const PatternIndex& index, const CostTables& tables,
                       const InteractionGrammar& ig, ApspBackend backend,
                       Counters* counters = nullptr);

// Depth-1 fast path: same value as interaction_min, final level closed from
// the single relevant source row only.  Throws InputError for depth != 1.
double interaction_min_single_source(const PatternIndex& index, const CostTables& tables,
                                     const InteractionGrammar& ig, Counters* counters = nullptr);

// Depth-1 one-level scan: same value, no pair tables at all.  Throws
// InputError for depth != 1 or for dense-table pair weights.
double interaction_min_earley(const PatternIndex& index, const CostTables& tables,
                              const InteractionGrammar& ig, Counters* counters = nullptr);

struct InteractionArgmin {
  double value = kInf;
  Word labeling;
};

// Minimum together with one minimizing labeling, recovered by re-walking the
// recursion (closure parents recorded, wrap/defer/scan segments re-derived by
// exact value matching).  Keeps every level's tables: memory grows with depth
// times the squared pattern count, so intended for moderate sizes.
InteractionArgmin interaction_argmin(const PatternIndex& index, const CostTables& tables,
                                     const InteractionGrammar& ig, ApspBackend backend,
                                     Counters* counters = nullptr);

}  // namespace pgi
