#include "pgi/apsp.hpp"

#include <vector>

#include "pgi/kernels.hpp"

namespace pgi {

ApspBackend apsp_backend_from_string(const std::string& name) {
  if (name == "reference") return ApspBackend::Reference;
  if (name == "useful-edge") return ApspBackend::UsefulEdge;
  throw InputError("unknown path backend \"" + name + "\" (expected reference or useful-edge)");
}

const char* to_string(ApspBackend backend) {
  return backend == ApspBackend::Reference ? "reference" : "useful-edge";
}

namespace {

void apsp_reference(TriMatrix<double>& m, Counters* counters, TriMatrix<int32_t>* parent) {
  const int P = m.ids();
  const auto& ops = kern::ops();
  for (int alpha = P - 1; alpha >= 0; --alpha) {
    const int cb = m.col_begin(alpha);
    double* row = m.row_from(alpha, cb);
    for (int gamma = cb; gamma < P; ++gamma) {
      // Row gamma is final (reverse source order), and row[gamma - cb] is
      // final too: only pushes out of columns before gamma write to it.
      const double a = row[gamma - cb];
      if (a == kInf) continue;
      const int gb = m.col_begin(gamma);
      if (gb >= P) continue;
      const std::size_t width = static_cast<std::size_t>(P - gb);
      const double* src = m.row_from(gamma, gb);
      double* dst = row + (gb - cb);
      if (parent) {
        int32_t* par = parent->row_from(alpha, gb);
        for (std::size_t c = 0; c < width; ++c) {
          const double cand = a + src[c];
          if (cand < dst[c]) {
            dst[c] = cand;
            par[c] = gamma;
          }
        }
      } else {
        ops.axpy_min(a, src, dst, width);
      }
      if (counters) counters->apsp_relax += width;
    }
  }
}

void apsp_useful_edge(TriMatrix<double>& m, Counters* counters, TriMatrix<int32_t>* parent) {
  const int P = m.ids();
  // Per-target in-edge lists restricted to edges that can end a hop-maximal
  // shortest path: the edge must keep its direct cost AND no two-hop
  // decomposition may tie it.  Dropping tied edges is safe because a
  // shortest path with the most hops never ends in one (the tying detour
  // would add hops), and the tie itself is always witnessed through a kept
  // edge for the same reason — so every pair retains a decomposition and a
  // tie is never missed.  This collapses the scan-composition plateaus
  // (every multi-step span ties its one-step splits) that otherwise keep
  // nearly all edges alive.  Costs are cached in the lists: sources are
  // finished rows, so their distances are final.
  std::vector<std::vector<std::pair<int, double>>> useful_in(P);
  std::vector<double> direct;  // pre-relaxation copy of the current row
  std::uint64_t relaxed = 0;
  for (int alpha = P - 1; alpha >= 0; --alpha) {
    const int cb = m.col_begin(alpha);
    if (cb >= P) continue;
    double* row = m.row_from(alpha, cb);
    direct.assign(row, row + (P - cb));
    for (int beta = cb; beta < P; ++beta) {
      const double dval = direct[beta - cb];
      double best = dval;
      int32_t via = -1;
      bool dominated = false;
      for (const auto& [gamma, edge] : useful_in[beta]) {
        if (gamma < cb) break;  // entries are sorted decreasing; rest unusable
        const double a = row[gamma - cb];
        if (a == kInf) continue;
        const double cand = a + edge;
        if (cand < best) {
          best = cand;
          via = gamma;
        } else if (cand == dval) {
          dominated = true;
        }
        ++relaxed;
      }
      row[beta - cb] = best;
      if (parent && via >= 0) parent->at(alpha, beta) = via;
      if (best == dval && !dominated && dval != kInf) useful_in[beta].emplace_back(alpha, dval);
    }
  }
  if (counters) counters->apsp_relax += relaxed;
}

}  // namespace

void apsp_in_place(TriMatrix<double>& cost, ApspBackend backend, Counters* counters,
                   TriMatrix<int32_t>* parent) {
  if (backend == ApspBackend::Reference)
    apsp_reference(cost, counters, parent);
  else
    apsp_useful_edge(cost, counters, parent);
}

}  // namespace pgi
