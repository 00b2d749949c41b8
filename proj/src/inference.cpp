#include "pgi/inference.hpp"

#include <stdexcept>
#include <string>
#include <type_traits>

#include "pgi/kernels.hpp"

namespace pgi {

BoundGrammar BoundGrammar::bind(const PatternIndex& index, CnfGrammar grammar) {
  BoundGrammar b;
  b.terminal_node.reserve(grammar.terminal.size());
  for (const auto& rule : grammar.terminal) {
    int node = index.trie_find(rule.word);
    if (node < 0)
      throw InputError("terminal word \"" + index.alphabet().to_string(rule.word) +
                       "\" is not a prefix of any vocabulary word; normalize the instance with "
                       "normalize_terminal_words() before binding");
    b.terminal_node.push_back(node);
  }
  b.grammar = std::move(grammar);
  return b;
}

template <class A>
SpanChart<A> compute_span_chart(const PatternIndex& index, const CostTables& tables,
                                const BoundGrammar& bound, Counters* counters) {
  using V = typename A::Value;
  const CnfGrammar& g = bound.grammar;
  const int n = index.n();
  SpanChart<A> chart;

  if (n == 0) {
    if (g.epsilon_weight.has_value()) chart.value = A::inject(*g.epsilon_weight);
    return chart;
  }

  const int N = static_cast<int>(g.names.size());
  chart.tables.reserve(N);
  for (int a = 0; a < N; ++a) chart.tables.emplace_back(index, A::zero());

  // Spans by increasing length: entries of length l only read entries of
  // strictly shorter lengths, so each length is final once processed.
  for (int len = 1; len <= n; ++len) {
    // Word rules seed spans of exactly the word's length.
    for (std::size_t ri = 0; ri < g.terminal.size(); ++ri) {
      const auto& rule = g.terminal[ri];
      if (static_cast<int>(rule.word.size()) != len) continue;
      const int node = bound.terminal_node[ri];
      TriMatrix<V>& ma = chart.tables[rule.head];
      for (int s = 0; s + len <= n; ++s) {
        const int t = s + len;
        const V w = A::inject(rule.weight.eval(s + 1, t));
        if (w == A::zero()) continue;
        for (int alpha = index.block_start(s); alpha < index.block_end(s); ++alpha) {
          const V cand = A::extend(A::inject(tables.f_pair(alpha, node)), w);
          const int beta = tables.lsp_pair(alpha, node);
          V& cell = ma.at(alpha, beta);
          cell = A::combine(cell, cand);
        }
      }
    }
    if (len < 2) continue;
    // Binary rules join a left span ending at gamma with a right span from
    // gamma; placements inside gamma are present in both factors, so one copy
    // is removed before composing.
    for (const auto& rule : g.binary) {
      TriMatrix<V>& ma = chart.tables[rule.head];
      const TriMatrix<V>& mb = chart.tables[rule.left];
      const TriMatrix<V>& mc = chart.tables[rule.right];
      for (int t = len; t <= n; ++t) {
        const int s = t - len;
        const V w = A::inject(rule.weight.eval(s + 1, t));
        if (w == A::zero()) continue;
        const int c0 = index.block_start(t);
        const std::size_t m = static_cast<std::size_t>(index.block_end(t) - c0);
        const int gamma_lo = index.block_start(s + 1);
        const int gamma_hi = index.block_start(t);
        for (int alpha = index.block_start(s); alpha < index.block_end(s); ++alpha) {
          V* out = ma.row_from(alpha, c0);
          for (int gamma = gamma_lo; gamma < gamma_hi; ++gamma) {
            const V b = mb.at(alpha, gamma);
            if (b == A::zero()) continue;
            const V a = A::extend(A::retract(b, A::inject(tables.f[gamma])), w);
            if (a == A::zero()) continue;
            const V* src = mc.row_from(gamma, c0);
            if constexpr (std::is_same_v<A, Tropical>) {
              kern::ops().axpy_min(a, src, out, m);
            } else {
              for (std::size_t c = 0; c < m; ++c) out[c] = A::combine(out[c], A::extend(a, src[c]));
            }
            if (counters) counters->binary_inner += m;
          }
        }
      }
    }
  }

  // Total: spans covering (0, n] from the empty context at position 0.
  const TriMatrix<V>& ms = chart.tables[g.start];
  for (int beta = index.block_start(n); beta < index.block_end(n); ++beta)
    chart.value = A::combine(chart.value, ms.at(0, beta));
  return chart;
}

template SpanChart<Tropical> compute_span_chart<Tropical>(const PatternIndex&, const CostTables&,
                                                          const BoundGrammar&, Counters*);
template SpanChart<LogSum> compute_span_chart<LogSum>(const PatternIndex&, const CostTables&,
                                                      const BoundGrammar&, Counters*);
template SpanChart<MaxProd> compute_span_chart<MaxProd>(const PatternIndex&, const CostTables&,
                                                        const BoundGrammar&, Counters*);

namespace {

// Re-walks the Tropical recursion from the filled chart.  Candidates are
// recomputed with exactly the arithmetic of the forward pass, so the witness
// test is bit-exact equality with the stored cell value.
struct Extractor {
  const PatternIndex& index;
  const CostTables& ct;
  const BoundGrammar& bound;
  const SpanChart<Tropical>& chart;
  ArgminResult result;

  int resolve(int head, int alpha, int beta) {
    const CnfGrammar& g = bound.grammar;
    const double val = chart.tables[head].at(alpha, beta);
    const int s = index.end_of(alpha);
    const int t = index.end_of(beta);
    const int len = t - s;
    for (std::size_t ri = 0; ri < g.terminal.size(); ++ri) {
      const auto& rule = g.terminal[ri];
      if (rule.head != head || static_cast<int>(rule.word.size()) != len) continue;
      const int node = bound.terminal_node[ri];
      if (ct.lsp_pair(alpha, node) != beta) continue;
      const double w = rule.weight.eval(s + 1, t);
      if (w == kInf) continue;
      if (ct.f_pair(alpha, node) + w != val) continue;
      for (int p = 0; p < len; ++p) result.labeling[s + p] = rule.word[p];
      Derivation::Node nd;
      nd.kind = Derivation::Node::Kind::Terminal;
      nd.rule = static_cast<int>(ri);
      nd.i = s + 1;
      nd.j = t;
      nd.weight = w;
      result.derivation.nodes.push_back(nd);
      return static_cast<int>(result.derivation.nodes.size()) - 1;
    }
    for (std::size_t ri = 0; ri < g.binary.size(); ++ri) {
      const auto& rule = g.binary[ri];
      if (rule.head != head) continue;
      const double w = rule.weight.eval(s + 1, t);
      if (w == kInf) continue;
      const TriMatrix<double>& mb = chart.tables[rule.left];
      const TriMatrix<double>& mc = chart.tables[rule.right];
      for (int gamma = index.block_start(s + 1); gamma < index.block_start(t); ++gamma) {
        const double b = mb.at(alpha, gamma);
        if (b == kInf) continue;
        const double a = (b - ct.f[gamma]) + w;
        if (a + mc.at(gamma, beta) != val) continue;
        const int left = resolve(rule.left, alpha, gamma);
        const int right = resolve(rule.right, gamma, beta);
        Derivation::Node nd;
        nd.kind = Derivation::Node::Kind::Binary;
        nd.rule = static_cast<int>(ri);
        nd.i = s + 1;
        nd.j = t;
        nd.weight = w;
        nd.left = left;
        nd.right = right;
        result.derivation.nodes.push_back(nd);
        return static_cast<int>(result.derivation.nodes.size()) - 1;
      }
    }
    throw std::logic_error("span chart re-search found no witness; chart is inconsistent");
  }
};

}  // namespace

ArgminResult extract_argmin(const PatternIndex& index, const CostTables& tables,
                            const BoundGrammar& bound, const SpanChart<Tropical>& chart) {
  ArgminResult result;
  result.value = chart.value;
  if (chart.value == kInf) return result;
  const int n = index.n();
  if (n == 0) {
    Derivation::Node nd;
    nd.kind = Derivation::Node::Kind::Epsilon;
    nd.weight = *bound.grammar.epsilon_weight;
    result.derivation.nodes.push_back(nd);
    result.derivation.root = 0;
    return result;
  }
  Extractor ex{index, tables, bound, chart, {}};
  ex.result.value = chart.value;
  ex.result.labeling.assign(n, 0);
  const TriMatrix<double>& ms = chart.tables[bound.grammar.start];
  for (int beta = index.block_start(n); beta < index.block_end(n); ++beta) {
    if (ms.at(0, beta) != chart.value) continue;
    ex.result.derivation.root = ex.resolve(bound.grammar.start, 0, beta);
    return std::move(ex.result);
  }
  throw std::logic_error("no final context attains the chart total; chart is inconsistent");
}

}  // namespace pgi
