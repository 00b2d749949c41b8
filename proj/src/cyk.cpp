// Chart parsing for extended-CNF grammars: least derivation cost with
// reconstruction, log-inside sums, and exhaustive derivation enumeration.

#include <algorithm>
#include <cstring>
#include <map>

#include "pgi/algebra.hpp"
#include "pgi/grammar.hpp"

namespace pgi {

namespace {

struct Choice {
  signed char kind = 0;  // 0 none, 1 terminal, 2 binary
  int rule = -1;
  int split = -1;
};

// Shared chart driver: Fold(cur, candidate) accumulates terminal and binary
// candidate values per (span, head) cell in declaration order.
struct ChartDims {
  int n = 0, N = 0;
  std::size_t cell(int i, int A) const {
    return (static_cast<std::size_t>(i - 1) * N) + A;
  }
};

int build_nodes(const CnfGrammar& g, const Word& x,
                const std::vector<std::vector<double>>& val,
                const std::vector<std::vector<Choice>>& choice, ChartDims dims, int A, int i,
                int len, Derivation& out) {
  const Choice& c = choice[len][dims.cell(i, A)];
  if (c.kind == 0) throw std::logic_error("reconstruction reached an underivable cell");
  Derivation::Node node;
  node.i = i;
  node.j = i + len - 1;
  if (c.kind == 1) {
    node.kind = Derivation::Node::Kind::Terminal;
    node.rule = c.rule;
    node.weight = g.terminal[c.rule].weight.eval(node.i, node.j);
  } else {
    const auto& rule = g.binary[c.rule];
    node.kind = Derivation::Node::Kind::Binary;
    node.rule = c.rule;
    node.weight = rule.weight.eval(node.i, node.j);
    node.left = build_nodes(g, x, val, choice, dims, rule.left, i, c.split - i + 1, out);
    node.right = build_nodes(g, x, val, choice, dims, rule.right, c.split + 1, node.j - c.split, out);
  }
  out.nodes.push_back(node);
  return static_cast<int>(out.nodes.size()) - 1;
}

bool matches_at(const Word& x, const Word& w, int i) {
  return std::equal(w.begin(), w.end(), x.begin() + (i - 1));
}

}  // namespace

double cyk_min_parse(const Word& x, const CnfGrammar& g, Derivation* out) {
  const int n = static_cast<int>(x.size());
  const int N = static_cast<int>(g.names.size());
  if (out) *out = Derivation{};
  if (n == 0) {
    if (!g.epsilon_weight.has_value()) return kInf;
    if (out) {
      Derivation::Node node;
      node.kind = Derivation::Node::Kind::Epsilon;
      node.weight = *g.epsilon_weight;
      out->nodes.push_back(node);
      out->root = 0;
    }
    return *g.epsilon_weight;
  }
  ChartDims dims{n, N};
  std::vector<std::vector<double>> val(n + 1);
  std::vector<std::vector<Choice>> choice(n + 1);
  for (int len = 1; len <= n; ++len) {
    val[len].assign(static_cast<std::size_t>(n - len + 1) * N, kInf);
    choice[len].assign(static_cast<std::size_t>(n - len + 1) * N, Choice{});
  }
  for (std::size_t r = 0; r < g.terminal.size(); ++r) {
    const auto& rule = g.terminal[r];
    int len = static_cast<int>(rule.word.size());
    if (len > n) continue;
    for (int i = 1; i + len - 1 <= n; ++i) {
      if (!matches_at(x, rule.word, i)) continue;
      double w = rule.weight.eval(i, i + len - 1);
      auto& cur = val[len][dims.cell(i, rule.head)];
      if (w < cur) {
        cur = w;
        choice[len][dims.cell(i, rule.head)] = {1, static_cast<int>(r), -1};
      }
    }
  }
  for (int len = 2; len <= n; ++len) {
    for (int i = 1; i + len - 1 <= n; ++i) {
      int j = i + len - 1;
      for (std::size_t r = 0; r < g.binary.size(); ++r) {
        const auto& rule = g.binary[r];
        double w = rule.weight.eval(i, j);
        if (w == kInf) continue;
        for (int m = i; m < j; ++m) {
          double left = val[m - i + 1][dims.cell(i, rule.left)];
          if (left == kInf) continue;
          double right = val[j - m][dims.cell(m + 1, rule.right)];
          if (right == kInf) continue;
          double cand = left + right + w;
          auto& cur = val[len][dims.cell(i, rule.head)];
          if (cand < cur) {
            cur = cand;
            choice[len][dims.cell(i, rule.head)] = {2, static_cast<int>(r), m};
          }
        }
      }
    }
  }
  double result = val[n][dims.cell(1, g.start)];
  if (out && result != kInf) out->root = build_nodes(g, x, val, choice, dims, g.start, 1, n, *out);
  return result;
}

double cyk_log_inside(const Word& x, const CnfGrammar& g) {
  const int n = static_cast<int>(x.size());
  const int N = static_cast<int>(g.names.size());
  if (n == 0) return g.epsilon_weight.has_value() ? -*g.epsilon_weight : -kInf;
  ChartDims dims{n, N};
  std::vector<std::vector<double>> in(n + 1);
  for (int len = 1; len <= n; ++len)
    in[len].assign(static_cast<std::size_t>(n - len + 1) * N, -kInf);
  for (const auto& rule : g.terminal) {
    int len = static_cast<int>(rule.word.size());
    if (len > n) continue;
    for (int i = 1; i + len - 1 <= n; ++i) {
      if (!matches_at(x, rule.word, i)) continue;
      auto& cur = in[len][dims.cell(i, rule.head)];
      cur = logaddexp(cur, -rule.weight.eval(i, i + len - 1));
    }
  }
  for (int len = 2; len <= n; ++len) {
    for (int i = 1; i + len - 1 <= n; ++i) {
      int j = i + len - 1;
      for (const auto& rule : g.binary) {
        double w = rule.weight.eval(i, j);
        if (w == kInf) continue;
        for (int m = i; m < j; ++m) {
          double left = in[m - i + 1][dims.cell(i, rule.left)];
          if (left == -kInf) continue;
          double right = in[j - m][dims.cell(m + 1, rule.right)];
          if (right == -kInf) continue;
          auto& cur = in[len][dims.cell(i, rule.head)];
          cur = logaddexp(cur, left + right - w);
        }
      }
    }
  }
  return in[n][dims.cell(1, g.start)];
}

namespace {

// Saturating helpers for derivation counting.
std::size_t sat_add(std::size_t a, std::size_t b, std::size_t lim) {
  return (a > lim - b) ? lim : a + b;  // b <= lim always holds here
}
std::size_t sat_mul(std::size_t a, std::size_t b, std::size_t lim) {
  if (a == 0 || b == 0) return 0;
  return (a > lim / b) ? lim : a * b;
}

Derivation merge_binary(const CnfGrammar& g, int rule, int i, int j, const Derivation& l,
                        const Derivation& r) {
  Derivation d;
  d.nodes = l.nodes;
  int offset = static_cast<int>(d.nodes.size());
  for (Derivation::Node node : r.nodes) {
    if (node.left >= 0) node.left += offset;
    if (node.right >= 0) node.right += offset;
    d.nodes.push_back(node);
  }
  Derivation::Node top;
  top.kind = Derivation::Node::Kind::Binary;
  top.rule = rule;
  top.i = i;
  top.j = j;
  top.weight = g.binary[rule].weight.eval(i, j);
  top.left = l.root;
  top.right = r.root + offset;
  d.nodes.push_back(top);
  d.root = static_cast<int>(d.nodes.size()) - 1;
  return d;
}

}  // namespace

std::vector<Derivation> enumerate_derivations(const Word& x, const CnfGrammar& g, std::size_t cap) {
  const int n = static_cast<int>(x.size());
  const int N = static_cast<int>(g.names.size());
  if (n == 0) {
    if (!g.epsilon_weight.has_value() || *g.epsilon_weight == kInf) return {};
    Derivation d;
    Derivation::Node node;
    node.kind = Derivation::Node::Kind::Epsilon;
    node.weight = *g.epsilon_weight;
    d.nodes.push_back(node);
    d.root = 0;
    return {d};
  }
  ChartDims dims{n, N};
  const std::size_t lim = cap + 1;
  std::vector<std::vector<std::size_t>> cnt(n + 1);
  for (int len = 1; len <= n; ++len) cnt[len].assign(static_cast<std::size_t>(n - len + 1) * N, 0);
  for (const auto& rule : g.terminal) {
    int len = static_cast<int>(rule.word.size());
    if (len > n) continue;
    for (int i = 1; i + len - 1 <= n; ++i)
      if (matches_at(x, rule.word, i)) {
        if (rule.weight.eval(i, i + len - 1) == kInf) continue;
        auto& c = cnt[len][dims.cell(i, rule.head)];
        c = sat_add(c, 1, lim);
      }
  }
  for (int len = 2; len <= n; ++len)
    for (int i = 1; i + len - 1 <= n; ++i)
      for (const auto& rule : g.binary) {
        if (rule.weight.eval(i, i + len - 1) == kInf) continue;
        for (int m = i; m < i + len - 1; ++m) {
          std::size_t l = cnt[m - i + 1][dims.cell(i, rule.left)];
          std::size_t r = cnt[len - (m - i + 1)][dims.cell(m + 1, rule.right)];
          auto& c = cnt[len][dims.cell(i, rule.head)];
          c = sat_add(c, sat_mul(l, r, lim), lim);
        }
      }
  if (cnt[n][dims.cell(1, g.start)] > cap)
    throw SizeRefusal("derivation count exceeds the enumeration cap of " + std::to_string(cap));

  // Materialize, memoized per cell, in the cyk_min_parse tie order.
  std::map<std::tuple<int, int, int>, std::vector<Derivation>> memo;
  auto build = [&](auto&& self, int A, int i, int len) -> const std::vector<Derivation>& {
    auto key = std::make_tuple(A, i, len);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<Derivation> out;
    int j = i + len - 1;
    for (std::size_t r = 0; r < g.terminal.size(); ++r) {
      const auto& rule = g.terminal[r];
      if (rule.head != A || static_cast<int>(rule.word.size()) != len) continue;
      if (!matches_at(x, rule.word, i)) continue;
      if (rule.weight.eval(i, j) == kInf) continue;
      Derivation d;
      Derivation::Node node;
      node.kind = Derivation::Node::Kind::Terminal;
      node.rule = static_cast<int>(r);
      node.i = i;
      node.j = j;
      node.weight = rule.weight.eval(i, j);
      d.nodes.push_back(node);
      d.root = 0;
      out.push_back(std::move(d));
    }
    for (std::size_t r = 0; r < g.binary.size(); ++r) {
      const auto& rule = g.binary[r];
      if (rule.head != A) continue;
      if (rule.weight.eval(i, j) == kInf) continue;
      for (int m = i; m < j; ++m) {
        const auto& ls = self(self, rule.left, i, m - i + 1);
        if (ls.empty()) continue;
        const auto& rs = self(self, rule.right, m + 1, j - m);
        for (const Derivation& dl : ls)
          for (const Derivation& dr : rs)
            out.push_back(merge_binary(g, static_cast<int>(r), i, j, dl, dr));
      }
    }
    return memo.emplace(key, std::move(out)).first->second;
  };
  return build(build, g.start, 1, n);
}

}  // namespace pgi
