// All-pairs least-cost paths over the block DAG of pattern ids.
//
// Vertices are pattern ids; a directed edge alpha -> beta exists for every
// stored cell of the triangular cost matrix (i.e. end(alpha) < end(beta)),
// with +infinity marking an absent edge.  Costs may be negative; the id order
// is a topological order, so paths are well defined.  dist(alpha, beta) is
// the least total cost over paths of one or more edges, computed in place
// over the cost matrix.
//
// Backends (equivalence-tested; integer inputs produce identical outputs,
// floating inputs agree to rounding because path sums associate differently):
//
//  - Reference: per-source forward relaxation in reverse source order.  When
//    source row alpha reaches column gamma, that entry is the final distance
//    dist(alpha, gamma) and row gamma already holds final distances, so one
//    row kernel per (alpha, gamma) pair suffices.  Work is Theta(P^3) row
//    kernel operations regardless of structure.
//
//  - UsefulEdge: an edge is useful when its own cost already equals the
//    distance between its endpoints (every edge of any least-cost path is
//    useful, by sub-path optimality).  Sources are processed in reverse
//    order; finishing a row reveals its useful out-edges by a scan comparing
//    distances against the pre-relaxation copy of the row, and those edges
//    are appended to per-target in-edge lists.  Earlier sources then relax
//    only through useful in-edges, whose cost survives the in-place update
//    (cost == distance is exactly what usefulness means).  Work is
//    O(P * |useful edges| + P^2).
//
// counters->apsp_relax counts elementwise relaxations in both backends.

#pragma once

#include <string>

#include "pgi/pattern.hpp"
#include "pgi/tri.hpp"

namespace pgi {

enum class ApspBackend { Reference, UsefulEdge };

ApspBackend apsp_backend_from_string(const std::string& name);  // "reference" | "useful-edge"
const char* to_string(ApspBackend backend);

// Replaces every stored cell of `cost` with the least path cost between its
// endpoints (>= 1 edge).  Cells on unreachable pairs keep +infinity.
//
// When `parent` is non-null it must have the same shape, pre-filled with -1;
// parent(a, b) is set to the vertex whose sub-paths produced dist(a, b)
// whenever it beat the direct edge (reference: a->g then g->b; useful-edge: g
// is the tail of the final edge), so recursing on (a, g) and (g, b) down to
// -1 entries decomposes every pair into direct edges.  Values are identical
// with and without tracking (the tracked pass relaxes scalar-wise in the same
// order as the row kernels, and min/add are exact).
void apsp_in_place(TriMatrix<double>& cost, ApspBackend backend, Counters* counters = nullptr,
                   TriMatrix<int32_t>* parent = nullptr);

}  // namespace pgi
