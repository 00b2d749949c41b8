// Pattern index construction: prefix trie with suffix (failure) links, Pi
// membership with right-boundary completion checks, suffix forests, the
// lsp-extension automaton, and the incremental cost tables.

#include "pgi/pattern.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <set>

namespace pgi {

Alphabet::Alphabet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) throw InputError("alphabet label must be non-empty");
    if (!by_label_.emplace(labels_[i], static_cast<Label>(i)).second)
      throw InputError("duplicate alphabet label '" + labels_[i] + "'");
  }
  if (labels_.size() > 255) throw InputError("alphabet too large");
}

Label Alphabet::id(const std::string& label) const {
  auto it = by_label_.find(label);
  if (it == by_label_.end()) throw InputError("unknown label '" + label + "'");
  return it->second;
}

bool Alphabet::has(const std::string& label) const { return by_label_.count(label) != 0; }

Word Alphabet::word_from_string(const std::string& s) const {
  for (const auto& l : labels_)
    if (l.size() != 1)
      throw InputError("word strings require single-character labels");
  Word w;
  w.reserve(s.size());
  for (char c : s) w.push_back(id(std::string(1, c)));
  return w;
}

std::string Alphabet::to_string(const Word& w) const {
  std::string s;
  for (Label a : w) {
    if (a >= labels_.size()) throw InputError("label id out of range");
    s += labels_[a];
  }
  return s;
}

Pattern empty_pattern_at(int s) { return Pattern{s + 1, s, {}}; }

double PatternWeights::placement_cost(int vocab_index, int start) const {
  auto it = cost.find({vocab_index, start});
  return it == cost.end() ? 0.0 : it->second;
}

int PatternWeights::find_word(const Word& w) const {
  for (std::size_t i = 0; i < vocabulary.size(); ++i)
    if (vocabulary[i] == w) return static_cast<int>(i);
  return -1;
}

void PatternWeights::validate() const {
  if (n < 0) throw InputError("n must be non-negative");
  if (alphabet.size() == 0) throw InputError("alphabet must be non-empty");
  std::set<Word> seen;
  for (const Word& w : vocabulary) {
    if (w.empty()) throw InputError("vocabulary words must be non-empty");
    if (!seen.insert(w).second) throw InputError("duplicate vocabulary word");
    for (Label a : w)
      if (a >= alphabet.size()) throw InputError("vocabulary word uses label outside alphabet");
  }
  for (const auto& [key, c] : cost) {
    auto [vi, start] = key;
    if (vi < 0 || vi >= static_cast<int>(vocabulary.size()))
      throw InputError("cost entry references unknown vocabulary word");
    int len = static_cast<int>(vocabulary[vi].size());
    if (start < 1 || start + len - 1 > n)
      throw InputError("cost entry placement does not fit within [1,n]");
    // Placement costs sum over occurrences, so infinities have no sensible
    // meaning on this side of the energy; hard constraints belong to the
    // grammar weights, where min-cost semantics absorbs them.
    if (!std::isfinite(c)) throw InputError("cost entry must be finite");
  }
}

PatternIndex::PatternIndex(const PatternWeights& weights) {
  weights.validate();
  n_ = weights.n;
  d_ = weights.alphabet.size();
  alphabet_ = weights.alphabet;

  // Trie over all prefixes of vocabulary words.
  trie_parent_ = {-1};
  trie_depth_ = {0};
  trie_symbol_ = {0};
  trie_vocab_ = {-1};
  trie_child_.assign(d_, -1);
  min_word_len_ = 0;
  for (std::size_t vi = 0; vi < weights.vocabulary.size(); ++vi) {
    const Word& w = weights.vocabulary[vi];
    int v = 0;
    for (Label a : w) {
      int c = trie_child_[static_cast<std::size_t>(v) * d_ + a];
      if (c < 0) {
        c = static_cast<int>(trie_parent_.size());
        trie_parent_.push_back(v);
        trie_depth_.push_back(trie_depth_[v] + 1);
        trie_symbol_.push_back(a);
        trie_vocab_.push_back(-1);
        trie_child_.resize(trie_child_.size() + d_, -1);
        trie_child_[static_cast<std::size_t>(v) * d_ + a] = c;
      }
      v = c;
    }
    trie_vocab_[v] = static_cast<int>(vi);
    total_length_ += static_cast<long long>(w.size());
    max_word_len_ = std::max(max_word_len_, static_cast<int>(w.size()));
    int len = static_cast<int>(w.size());
    min_word_len_ = min_word_len_ == 0 ? len : std::min(min_word_len_, len);
  }
  const int T = trie_size();

  // Failure links (longest proper suffix that is a trie node), BFS order.
  trie_fail_.assign(T, 0);
  {
    std::vector<int> bfs{0};
    for (std::size_t k = 0; k < bfs.size(); ++k) {
      int v = bfs[k];
      for (Label a = 0; a < d_; ++a) {
        int c = trie_child_[static_cast<std::size_t>(v) * d_ + a];
        if (c < 0) continue;
        if (v != 0) {
          int u = trie_fail_[v];
          while (u != 0 && trie_child_[static_cast<std::size_t>(u) * d_ + a] < 0) u = trie_fail_[u];
          int t = trie_child_[static_cast<std::size_t>(u) * d_ + a];
          trie_fail_[c] = t >= 0 ? t : 0;
        }
        bfs.push_back(c);
      }
    }
  }

  // Shortest completion to a full vocabulary word below (or at) each node.
  trie_min_tail_.assign(T, n_ + 2);
  for (int v = T - 1; v >= 0; --v) {  // children have larger ids than parents
    if (trie_vocab_[v] >= 0) trie_min_tail_[v] = 0;
    if (v > 0) {
      int p = trie_parent_[v];
      trie_min_tail_[p] = std::min(trie_min_tail_[p], trie_min_tail_[v] + 1);
    }
  }

  // Enumerate Pi grouped by end position; blocks sorted by (depth, node).
  block_start_.assign(n_ + 2, 0);
  id_at_.assign(static_cast<std::size_t>(n_ + 1) * T, -1);
  std::vector<int> nodes_by_depth(T);
  for (int v = 0; v < T; ++v) nodes_by_depth[v] = v;
  std::stable_sort(nodes_by_depth.begin(), nodes_by_depth.end(),
                   [&](int a, int b) { return trie_depth_[a] < trie_depth_[b]; });
  for (int s = 0; s <= n_; ++s) {
    block_start_[s] = count_;
    for (int v : nodes_by_depth) {
      if (!present(s, v)) continue;
      id_at_[static_cast<std::size_t>(s) * T + v] = count_;
      end_of_.push_back(s);
      node_of_.push_back(v);
      ++count_;
    }
  }
  block_start_[n_ + 1] = count_;

  // Suffix forest: first failure-chain ancestor present at the same end.
  suffix_parent_.assign(count_, -1);
  prefix_of_.assign(count_, -1);
  for (int id = 0; id < count_; ++id) {
    int s = end_of_[id];
    int v = node_of_[id];
    if (v == 0) continue;  // eps_s is a root
    int u = trie_fail_[v];
    while (u != 0 && !present(s, u)) u = trie_fail_[u];
    suffix_parent_[id] = id_at(s, u);
    int p = trie_parent_[v];
    prefix_of_[id] = id_at(s - 1, p);
    assert(prefix_of_[id] >= 0);
  }

  // lsp-extension automaton.  For id ending at s < n and symbol a, the target
  // is the deepest failure-chain candidate child present at s + 1.
  step_.assign(static_cast<std::size_t>(count_) * d_, -1);
  for (int id = 0; id < count_; ++id) {
    int s = end_of_[id];
    if (s >= n_) continue;
    for (Label a = 0; a < d_; ++a) {
      int u = node_of_[id];
      int target = -1;
      while (true) {
        int c = trie_child_[static_cast<std::size_t>(u) * d_ + a];
        if (c >= 0 && present(s + 1, c)) { target = id_at(s + 1, c); break; }
        if (u == 0) { target = eps_id(s + 1); break; }
        u = trie_fail_[u];
      }
      step_[static_cast<std::size_t>(id) * d_ + a] = target;
    }
  }
}

Pattern PatternIndex::pattern(int id) const {
  Pattern p;
  p.end = end_of_[id];
  p.word = trie_word(node_of_[id]);
  p.start = p.end - static_cast<int>(p.word.size()) + 1;
  return p;
}

int PatternIndex::trie_find(const Word& w) const {
  int v = 0;
  for (Label a : w) {
    if (a >= d_) throw InputError("label id outside alphabet");
    v = trie_child_[static_cast<std::size_t>(v) * d_ + a];
    if (v < 0) return -1;
  }
  return v;
}

Word PatternIndex::trie_word(int v) const {
  Word w(trie_depth_[v]);
  for (int i = trie_depth_[v] - 1; i >= 0; --i) {
    w[i] = trie_symbol_[v];
    v = trie_parent_[v];
  }
  return w;
}

int lsp(const PatternIndex& index, const Pattern& alpha) {
  if (alpha.start < 1 || alpha.end > index.n() || alpha.end - alpha.start + 1 != alpha.len())
    throw InputError("pattern does not fit within [1,n]");
  int state = index.eps_id(alpha.start - 1);
  for (Label a : alpha.word) {
    if (a >= index.alphabet_size()) throw InputError("label id outside alphabet");
    state = index.step(state, a);
  }
  return state;
}

bool precedes(const PatternIndex& index, const Pattern& alpha, const Pattern& beta) {
  if (alpha.start < 1 || alpha.end > index.n() || beta.start < 1 || beta.end > index.n())
    throw InputError("pattern does not fit within [1,n]");
  if (beta.end <= alpha.end) return false;
  if (beta.start < alpha.start) return false;
  // Words must agree on the overlap [i_beta, j_alpha] (empty when disjoint).
  for (int p = beta.start; p <= alpha.end; ++p) {
    if (alpha.word[p - alpha.start] != beta.word[p - beta.start]) return false;
  }
  return true;
}

CostTables compute_cost_tables(const PatternIndex& index, const PatternWeights& weights,
                               Counters* counters) {
  const int P = index.count();
  const int T = index.trie_size();
  CostTables t;
  t.trie_size = T;
  t.phi.assign(P, 0.0);
  t.f.assign(P, 0.0);
  t.f_ext.assign(static_cast<std::size_t>(P) * T, std::numeric_limits<double>::quiet_NaN());
  t.lsp_ext.assign(static_cast<std::size_t>(P) * T, -1);
  std::uint64_t adds = 0;

  // phi via the suffix forest (parents precede children within a block), then
  // f via the prefix chain (prefixes live in earlier blocks).
  for (int id = 0; id < P; ++id) {
    int parent = index.suffix_parent(id);
    if (parent < 0) continue;  // empty pattern: phi = 0, f = 0
    t.phi[id] = t.phi[parent];
    if (index.is_vocab_word(id)) {
      t.phi[id] += weights.placement_cost(index.vocab_index(id), index.start_of(id));
      ++adds;
    }
    t.f[id] = t.f[index.prefix_of(id)] + t.phi[id];
    ++adds;
  }

  // Extension tables: a DFS over the trie per pattern, each edge one addition.
  // f(alpha*wa) = f(alpha*w) + phi(lsp(alpha*wa)) and lsp factors through step.
  std::vector<int> stack;
  for (int id = 0; id < P; ++id) {
    int s = index.end_of(id);
    std::size_t base = static_cast<std::size_t>(id) * T;
    t.f_ext[base] = t.f[id];
    t.lsp_ext[base] = id;
    stack.assign(1, 0);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      if (s + index.trie_depth(v) >= index.n()) continue;  // children would not fit
      for (Label a = 0; a < index.alphabet_size(); ++a) {
        int c = index.trie_child(v, a);
        if (c < 0) continue;
        int state = index.step(t.lsp_ext[base + v], a);
        t.lsp_ext[base + c] = state;
        t.f_ext[base + c] = t.f_ext[base + v] + t.phi[state];
        ++adds;
        stack.push_back(c);
      }
    }
  }
  if (counters) counters->table_additions += adds;
  return t;
}

}  // namespace pgi
