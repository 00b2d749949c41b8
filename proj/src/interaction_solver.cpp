#include "pgi/interaction_solver.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pgi/kernels.hpp"
#include "pgi/tri.hpp"

namespace pgi {

namespace {

// Per-pair data that does not depend on the level: trie nodes and lengths of
// the two pair words.
struct PairNodes {
  int nu = -1, nv = -1;
  int lu = 0, lv = 0;
};

std::vector<PairNodes> prepare(const PatternIndex& index, const InteractionGrammar& ig) {
  validate_interaction(ig, index.alphabet());
  std::vector<PairNodes> out;
  out.reserve(ig.pairs.size());
  for (const auto& p : ig.pairs) {
    PairNodes pn;
    pn.nu = index.trie_find(p.left);
    pn.nv = index.trie_find(p.right);
    if (pn.nu < 0 || pn.nv < 0) {
      const Word& missing = pn.nu < 0 ? p.left : p.right;
      throw InputError("interaction pair word \"" + index.alphabet().to_string(missing) +
                       "\" is not a prefix of any vocabulary word; normalize the instance with "
                       "normalize_terminal_words() before solving");
    }
    for (const WeightSpec& th : p.theta) {
      if (th.positions() != 0 && th.positions() != index.n())
        throw InputError("pair weight covers " + std::to_string(th.positions()) +
                         " positions but the instance has n = " + std::to_string(index.n()));
    }
    pn.lu = static_cast<int>(p.left.size());
    pn.lv = static_cast<int>(p.right.size());
    out.push_back(pn);
  }
  return out;
}

// Free-language table: m(alpha, beta) = least f-mass of any extension of alpha
// whose string runs over (end(alpha), end(beta)] and leaves suffix state beta,
// the grammar contributing nothing.  One forward scan of the suffix-extension
// automaton per anchor row, accumulating phi per consumed position; the scan
// writes block t+1 of the row while reading block t, which never overlap.
// Closed under concatenation as computed, so no shortest-path pass is needed.
void fill_free_table(const PatternIndex& ix, const CostTables& ct, TriMatrix<double>& m,
                     Counters* counters) {
  const int n = ix.n();
  const int d = ix.alphabet_size();
  const int P = ix.count();
  std::uint64_t steps = 0;
  for (int alpha = 0; alpha < P; ++alpha) {
    const int s0 = ix.end_of(alpha);
    if (s0 >= n) continue;
    const int cb = m.col_begin(alpha);
    double* row = m.row_from(alpha, cb);
    const double fa = ct.f[alpha];
    for (int a = 0; a < d; ++a) {
      const int delta = ix.step(alpha, static_cast<Label>(a));
      const double cand = fa + ct.phi[delta];
      double& cell = row[delta - cb];
      if (cand < cell) cell = cand;
    }
    steps += static_cast<std::uint64_t>(d);
    for (int t = s0 + 1; t < n; ++t) {
      const int bs = ix.block_start(t);
      const int be = ix.block_end(t);
      for (int gamma = bs; gamma < be; ++gamma) {
        const double v = row[gamma - cb];
        if (v == kInf) continue;
        for (int a = 0; a < d; ++a) {
          const int delta = ix.step(gamma, static_cast<Label>(a));
          const double cand = v + ct.phi[delta];
          double& cell = row[delta - cb];
          if (cand < cell) cell = cand;
        }
        steps += static_cast<std::uint64_t>(d);
      }
    }
  }
  if (counters) counters->m0_steps += steps;
}

// Absorption tables for one pair, per pattern id:
//   gamma_u[id] : suffix state after appending u to id   (-1 when u overruns n)
//   left_c[id]  : f gained by that absorption, with the f-mass of the landing
//                 state removed so a following table entry can be added
//   beta_v[id]  : suffix state after appending v to id    (-1 when v overruns n)
//   right_c[id] : f gained by absorbing v, with the f-mass of id removed so it
//                 composes with a table entry that ends at id
struct Absorb {
  std::vector<int32_t> gamma_u, beta_v;
  std::vector<double> left_c, right_c;
};

Absorb fill_absorb(const PatternIndex& ix, const CostTables& ct, const PairNodes& pn) {
  const int P = ix.count();
  const int n = ix.n();
  Absorb w;
  w.gamma_u.assign(P, -1);
  w.beta_v.assign(P, -1);
  w.left_c.assign(P, 0.0);
  w.right_c.assign(P, 0.0);
  for (int id = 0; id < P; ++id) {
    const int e = ix.end_of(id);
    if (e + pn.lu <= n) {
      const int g = ct.lsp_pair(id, pn.nu);
      w.gamma_u[id] = g;
      w.left_c[id] = ct.f_pair(id, pn.nu) - ct.f[g];
    }
    if (e + pn.lv <= n) {
      w.beta_v[id] = ct.lsp_pair(id, pn.nv);
      w.right_c[id] = ct.f_pair(id, pn.nv) - ct.f[id];
    }
  }
  return w;
}

// One wrap family at one level: for every left context alpha, wrap u . middle . v
// where the middle is drawn from `below` (the closed table one level down) or
// is empty, and charge the pair weight on the wrapped span.  Minima accumulate
// into `wraps`.  The empty middle needs no table entry: the level below derives
// the empty string for free, so the absorption costs compose directly.
void wrap_pass(const PatternIndex& ix, const CostTables& ct, const PairNodes& pn, const Absorb& w,
               const WeightSpec& th, const TriMatrix<double>& below, TriMatrix<double>& wraps,
               Counters* counters) {
  const int n = ix.n();
  const int P = ix.count();
  std::uint64_t triples = 0;
  for (int alpha = 0; alpha < P; ++alpha) {
    const int gamma = w.gamma_u[alpha];
    if (gamma < 0) continue;
    ++triples;
    const int ja = ix.end_of(alpha);
    const int jg = ix.end_of(gamma);
    if (jg + 1 > n - pn.lv) continue;  // no room for a non-empty middle plus v
    const double lc = w.left_c[alpha];
    const int d0 = ix.block_start(jg + 1);
    const int d1 = ix.block_start(n - pn.lv + 1);
    const double* mrow = below.row_from(gamma, d0);
    for (int delta = d0; delta < d1; ++delta) {
      const double mv = mrow[delta - d0];
      if (mv == kInf) continue;
      const int beta = w.beta_v[delta];
      const double tv = th.eval(ja + 1, ix.end_of(delta) + pn.lv);
      const double cand = ((lc + mv) + w.right_c[delta]) + tv;
      double& cell = wraps.at(alpha, beta);
      if (cand < cell) cell = cand;
    }
  }
  for (int alpha = 0; alpha < P; ++alpha) {
    const int ja = ix.end_of(alpha);
    if (ja + pn.lu + pn.lv > n) continue;
    ++triples;
    const int gamma = w.gamma_u[alpha];
    const int beta = w.beta_v[gamma];
    const double tv = th.eval(ja + 1, ix.end_of(gamma) + pn.lv);
    const double cand = (ct.f_pair(alpha, pn.nu) + w.right_c[gamma]) + tv;
    double& cell = wraps.at(alpha, beta);
    if (cand < cell) cell = cand;
  }
  if (counters) counters->vertical_triples += triples;
}

// Table cells carry f-mass up to and including the column pattern; the
// shortest-path closure wants pure edge costs, so the column's own f-mass is
// removed before the pass and restored afterwards.  +infinity cells (absent
// edges) are left untouched.
void shift_column_mass(const PatternIndex& ix, const CostTables& ct, TriMatrix<double>& m,
                       bool restore) {
  const int P = ix.count();
  for (int r = 0; r < P; ++r) {
    const int cb = m.col_begin(r);
    double* row = m.row_from(r, cb);
    for (int c = cb; c < P; ++c) {
      double& cell = row[c - cb];
      if (cell == kInf) continue;
      cell = restore ? cell + ct.f[c] : cell - ct.f[c];
    }
  }
}

// Deferring to the level below costs nothing, so fold its closed table in
// before closing this level.  Both tables share one layout.
void carry_over(const TriMatrix<double>& below, TriMatrix<double>& wraps) {
  kern::ops().vmin(below.raw().data(), wraps.raw().data(), wraps.size());
}

double fold_root_row(const PatternIndex& ix, const TriMatrix<double>& top) {
  const int n = ix.n();
  const int bs = ix.block_start(n);
  const double* row = top.row_from(ix.eps_id(0), bs);
  double best = kInf;
  for (int beta = bs; beta < ix.block_end(n); ++beta) best = std::min(best, row[beta - bs]);
  return best;
}

}  // namespace

double interaction_min(const PatternIndex& index, const CostTables& tables,
                       const InteractionGrammar& ig, ApspBackend backend, Counters* counters) {
  const auto pns = prepare(index, ig);
  if (index.n() == 0) return 0.0;

  TriMatrix<double> level(index, kInf);
  fill_free_table(index, tables, level, counters);
  std::vector<Absorb> absorb;
  absorb.reserve(pns.size());
  for (const auto& pn : pns) absorb.push_back(fill_absorb(index, tables, pn));

  TriMatrix<double> wraps(index, kInf);
  for (int k = 1; k <= ig.depth; ++k) {
    for (std::size_t p = 0; p < pns.size(); ++p)
      wrap_pass(index, tables, pns[p], absorb[p], ig.pairs[p].theta[k - 1], level, wraps,
                counters);
    carry_over(level, wraps);
    shift_column_mass(index, tables, wraps, /*restore=*/false);
    apsp_in_place(wraps, backend, counters);
    shift_column_mass(index, tables, wraps, /*restore=*/true);
    std::swap(level, wraps);
    wraps.fill(kInf);
  }
  return fold_root_row(index, level);
}

double interaction_min_single_source(const PatternIndex& index, const CostTables& tables,
                                     const InteractionGrammar& ig, Counters* counters) {
  if (ig.depth != 1)
    throw InputError("the single-source solver handles interaction depth 1 only");
  const auto pns = prepare(index, ig);
  const int n = index.n();
  if (n == 0) return 0.0;

  TriMatrix<double> level(index, kInf);
  fill_free_table(index, tables, level, counters);
  TriMatrix<double> wraps(index, kInf);
  for (std::size_t p = 0; p < pns.size(); ++p) {
    const Absorb w = fill_absorb(index, tables, pns[p]);
    wrap_pass(index, tables, pns[p], w, ig.pairs[p].theta[0], level, wraps, counters);
  }
  carry_over(level, wraps);
  shift_column_mass(index, tables, wraps, /*restore=*/false);

  // Only the row of the empty context at position 0 is ever read by the final
  // fold, so relax single-source over the edge DAG instead of closing the
  // whole table: ids ascend along every edge, making one ascending push pass
  // exact.  Edge rows are read from the untouched table.
  const int P = index.count();
  const int root = index.eps_id(0);
  std::vector<double> dist(P, kInf);
  {
    const int cb = wraps.col_begin(root);
    const double* row = wraps.row_from(root, cb);
    for (int c = cb; c < P; ++c) dist[c] = row[c - cb];
  }
  std::uint64_t relax = 0;
  for (int gamma = root + 1; gamma < P; ++gamma) {
    const double a = dist[gamma];
    if (a == kInf) continue;
    const int cb = wraps.col_begin(gamma);
    const double* row = wraps.row_from(gamma, cb);
    for (int c = cb; c < P; ++c) {
      const double cand = a + row[c - cb];
      if (cand < dist[c]) dist[c] = cand;
    }
    relax += static_cast<std::uint64_t>(P - cb);
  }
  if (counters) counters->apsp_relax += relax;

  double best = kInf;
  for (int beta = index.block_start(n); beta < index.block_end(n); ++beta) {
    if (dist[beta] == kInf) continue;
    best = std::min(best, dist[beta] + tables.f[beta]);
  }
  return best;
}

double interaction_min_earley(const PatternIndex& index, const CostTables& tables,
                              const InteractionGrammar& ig, Counters* counters) {
  if (ig.depth != 1) throw InputError("the one-level scan handles interaction depth 1 only");
  const auto pns = prepare(index, ig);
  for (const auto& p : ig.pairs) {
    if (p.theta[0].kind() == WeightSpec::Kind::Table)
      throw InputError(
          "the one-level scan handles scalar or separable pair weights only; dense "
          "tables need the table solvers");
  }
  const int n = index.n();
  if (n == 0) return 0.0;
  const int d = index.alphabet_size();
  const int np = static_cast<int>(ig.pairs.size());

  // Wrap-progress machine, one track shared by all pairs since wraps never
  // nest at depth 1: state 0 is idle; pair p then owns a run of states,
  // first inside u (1..|u|-1 symbols consumed), then "middle open" (u done),
  // then inside v (1..|v|-1 consumed).  Completing v returns to idle.
  std::vector<int> base(np);
  int S = 1;
  for (int p = 0; p < np; ++p) {
    base[p] = S;
    S += pns[p].lu + pns[p].lv - 1;
  }
  auto in_u = [&](int p, int o) { return base[p] + (o - 1); };
  auto mid = [&](int p) { return base[p] + pns[p].lu - 1; };
  auto in_v = [&](int p, int o) { return base[p] + pns[p].lu - 1 + o; };

  std::vector<std::vector<int>> starts(static_cast<std::size_t>(d));
  for (int p = 0; p < np; ++p) starts[ig.pairs[p].left[0]].push_back(p);
  auto theta_start = [&](int p, int i) {
    const WeightSpec& th = ig.pairs[p].theta[0];
    return th.kind() == WeightSpec::Kind::Scalar ? th.scalar_value() : th.start_part()[i];
  };
  auto theta_end = [&](int p, int j) {
    const WeightSpec& th = ig.pairs[p].theta[0];
    return th.kind() == WeightSpec::Kind::Scalar ? 0.0 : th.end_part()[j];
  };

  // dp over (suffix state in block t) x (machine state); one scan, phi charged
  // on every consumed position.
  std::uint64_t steps = 0;
  std::vector<double> cur(static_cast<std::size_t>(S), kInf), nxt;
  cur[0] = 0.0;
  for (int t = 0; t < n; ++t) {
    const int bs = index.block_start(t), be = index.block_end(t);
    const int nbs = index.block_start(t + 1), nbe = index.block_end(t + 1);
    nxt.assign(static_cast<std::size_t>(nbe - nbs) * S, kInf);
    for (int pi = bs; pi < be; ++pi) {
      const double* src = cur.data() + static_cast<std::size_t>(pi - bs) * S;
      for (int a = 0; a < d; ++a) {
        const int pnext = index.step(pi, static_cast<Label>(a));
        const double add = tables.phi[pnext];
        double* dst = nxt.data() + static_cast<std::size_t>(pnext - nbs) * S;
        auto relax = [&](int mstate, double val) {
          ++steps;
          if (val < dst[mstate]) dst[mstate] = val;
        };
        if (src[0] != kInf) {  // idle: stay idle, or open a wrap on a matching first symbol
          const double idle = src[0] + add;
          relax(0, idle);
          for (int p : starts[a])
            relax(pns[p].lu == 1 ? mid(p) : in_u(p, 1), idle + theta_start(p, t + 1));
        }
        for (int p = 0; p < np; ++p) {
          const Word& u = ig.pairs[p].left;
          const Word& v = ig.pairs[p].right;
          const int lu = pns[p].lu, lv = pns[p].lv;
          for (int o = 1; o < lu; ++o) {
            const double vu = src[in_u(p, o)];
            if (vu == kInf || u[o] != a) continue;
            relax(o + 1 == lu ? mid(p) : in_u(p, o + 1), vu + add);
          }
          const double vm = src[mid(p)];
          if (vm != kInf) {  // middle symbols are free; v may open here (empty middle included)
            const double open = vm + add;
            relax(mid(p), open);
            if (v[0] == a) {
              if (lv == 1) relax(0, open + theta_end(p, t + 1));
              else relax(in_v(p, 1), open);
            }
          }
          for (int o = 1; o < lv; ++o) {
            const double vv = src[in_v(p, o)];
            if (vv == kInf || v[o] != a) continue;
            if (o + 1 == lv) relax(0, (vv + add) + theta_end(p, t + 1));
            else relax(in_v(p, o + 1), vv + add);
          }
        }
      }
    }
    cur.swap(nxt);
  }
  if (counters) counters->earley_steps += steps;

  double best = kInf;
  const int bs = index.block_start(n);
  for (int pi = bs; pi < index.block_end(n); ++pi)
    best = std::min(best, cur[static_cast<std::size_t>(pi - bs) * S]);
  return best;
}

namespace {

// Everything one level keeps for minimizer recovery: the per-segment table
// before closure (deferrals folded in), the closed table, and the closure's
// split witnesses.
struct LevelRecord {
  TriMatrix<double> wraps;
  TriMatrix<double> closed;
  TriMatrix<int32_t> parent;
};

// Re-walks the recursion behind a computed value.  Segment re-derivations
// recompute the original candidate expressions in the original evaluation
// order, so matches are exact value equalities even in floating point; any
// tie is resolved to the first matching candidate, which is a minimizer too.
struct Resolver {
  const PatternIndex& ix;
  const CostTables& ct;
  const InteractionGrammar& ig;
  const std::vector<PairNodes>& pns;
  const std::vector<Absorb>& absorb;
  const std::vector<LevelRecord>& levels;
  Word& out;

  void level(int k, int alpha, int beta) {
    if (k == 0) {
      free_segment(alpha, beta);
      return;
    }
    const int split = levels[k].parent.at(alpha, beta);
    if (split >= 0) {
      level(k, alpha, split);
      level(k, split, beta);
      return;
    }
    segment(k, alpha, beta);
  }

  // One closure edge: a deferral, a wrap around a non-empty middle, or a wrap
  // around an empty middle.
  void segment(int k, int alpha, int beta) {
    const double target = levels[k].wraps.at(alpha, beta);
    const TriMatrix<double>& below = levels[k - 1].closed;
    if (below.at(alpha, beta) == target) {
      level(k - 1, alpha, beta);
      return;
    }
    const int ja = ix.end_of(alpha);
    const int jb = ix.end_of(beta);
    for (std::size_t p = 0; p < pns.size(); ++p) {
      const PairNodes& pn = pns[p];
      const Absorb& w = absorb[p];
      const WeightSpec& th = ig.pairs[p].theta[k - 1];
      const int gamma = w.gamma_u[alpha];
      if (gamma < 0) continue;
      const int jg = ix.end_of(gamma);
      const int jmid = jb - pn.lv;
      if (jmid > jg) {
        const double lc = w.left_c[alpha];
        for (int delta = ix.block_start(jmid); delta < ix.block_end(jmid); ++delta) {
          if (w.beta_v[delta] != beta) continue;
          const double mv = below.at(gamma, delta);
          if (mv == kInf) continue;
          const double tv = th.eval(ja + 1, ix.end_of(delta) + pn.lv);
          if (((lc + mv) + w.right_c[delta]) + tv != target) continue;
          write_word(ja, ig.pairs[p].left);
          write_word(ix.end_of(delta), ig.pairs[p].right);
          level(k - 1, gamma, delta);
          return;
        }
      } else if (jmid == jg && w.beta_v[gamma] == beta) {
        const double tv = th.eval(ja + 1, jg + pn.lv);
        if ((ct.f_pair(alpha, pn.nu) + w.right_c[gamma]) + tv == target) {
          write_word(ja, ig.pairs[p].left);
          write_word(jg, ig.pairs[p].right);
          return;
        }
      }
    }
    throw std::logic_error("wrap segment does not re-derive its recorded value");
  }

  // Free-language segment: re-run the anchored scan with backpointers.  The
  // re-run visits candidates in the original order, so the final value is
  // bit-identical to the recorded one.
  void free_segment(int alpha, int beta) {
    const int s0 = ix.end_of(alpha);
    const int t1 = ix.end_of(beta);
    const double target = levels[0].closed.at(alpha, beta);
    const int d = ix.alphabet_size();
    std::vector<double> cur(static_cast<std::size_t>(ix.block_end(s0) - ix.block_start(s0)),
                            kInf);
    cur[alpha - ix.block_start(s0)] = ct.f[alpha];
    std::vector<std::vector<int32_t>> from(static_cast<std::size_t>(t1 - s0));
    std::vector<std::vector<Label>> sym(static_cast<std::size_t>(t1 - s0));
    for (int t = s0; t < t1; ++t) {
      const int bs = ix.block_start(t), be = ix.block_end(t);
      const int nbs = ix.block_start(t + 1), nbe = ix.block_end(t + 1);
      std::vector<double> nxt(static_cast<std::size_t>(nbe - nbs), kInf);
      auto& bf = from[t - s0];
      auto& bl = sym[t - s0];
      bf.assign(nbe - nbs, -1);
      bl.assign(nbe - nbs, 0);
      for (int gamma = bs; gamma < be; ++gamma) {
        const double v = cur[gamma - bs];
        if (v == kInf) continue;
        for (int a = 0; a < d; ++a) {
          const int delta = ix.step(gamma, static_cast<Label>(a));
          const double cand = v + ct.phi[delta];
          if (cand < nxt[delta - nbs]) {
            nxt[delta - nbs] = cand;
            bf[delta - nbs] = gamma;
            bl[delta - nbs] = static_cast<Label>(a);
          }
        }
      }
      cur.swap(nxt);
    }
    if (cur[beta - ix.block_start(t1)] != target)
      throw std::logic_error("free segment does not re-derive its recorded value");
    int state = beta;
    for (int t = t1; t > s0; --t) {
      const int nbs = ix.block_start(t);
      out[t - 1] = sym[t - s0 - 1][state - nbs];
      state = from[t - s0 - 1][state - nbs];
    }
    if (state != alpha) throw std::logic_error("free segment backtrack lost its anchor");
  }

  void write_word(int start, const Word& w) {
    for (std::size_t i = 0; i < w.size(); ++i) out[start + i] = w[i];
  }
};

}  // namespace

InteractionArgmin interaction_argmin(const PatternIndex& index, const CostTables& tables,
                                     const InteractionGrammar& ig, ApspBackend backend,
                                     Counters* counters) {
  const auto pns = prepare(index, ig);
  const int n = index.n();
  if (n == 0) return {0.0, {}};

  std::vector<Absorb> absorb;
  absorb.reserve(pns.size());
  for (const auto& pn : pns) absorb.push_back(fill_absorb(index, tables, pn));

  std::vector<LevelRecord> levels(static_cast<std::size_t>(ig.depth) + 1);
  levels[0].closed = TriMatrix<double>(index, kInf);
  fill_free_table(index, tables, levels[0].closed, counters);
  for (int k = 1; k <= ig.depth; ++k) {
    LevelRecord& L = levels[k];
    L.wraps = TriMatrix<double>(index, kInf);
    for (std::size_t p = 0; p < pns.size(); ++p)
      wrap_pass(index, tables, pns[p], absorb[p], ig.pairs[p].theta[k - 1],
                levels[k - 1].closed, L.wraps, counters);
    carry_over(levels[k - 1].closed, L.wraps);
    L.closed = L.wraps;
    shift_column_mass(index, tables, L.closed, /*restore=*/false);
    L.parent = TriMatrix<int32_t>(index, -1);
    apsp_in_place(L.closed, backend, counters, &L.parent);
    shift_column_mass(index, tables, L.closed, /*restore=*/true);
  }

  const TriMatrix<double>& top = levels[ig.depth].closed;
  double best = kInf;
  int beta_star = -1;
  for (int beta = index.block_start(n); beta < index.block_end(n); ++beta) {
    const double v = top.at(index.eps_id(0), beta);
    if (v < best) {
      best = v;
      beta_star = beta;
    }
  }
  InteractionArgmin out;
  out.value = best;
  if (beta_star < 0) return out;  // possible only with infinite placement costs
  out.labeling.assign(static_cast<std::size_t>(n), 0);
  Resolver res{index, tables, ig, pns, absorb, levels, out.labeling};
  res.level(ig.depth, index.eps_id(0), beta_star);
  return out;
}

}  // namespace pgi
