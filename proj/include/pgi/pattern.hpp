// Pattern machinery for pattern-based energies over strings of a fixed length n.
//
// A pattern is a word placed at an absolute position: alpha = ([i,j], w) with
// j = i + |w| - 1; the empty pattern at s is eps_s = ([s+1,s], "").  Given a
// vocabulary Lambda with placement costs, Pi_deg is the set of all placements of
// Lambda words inside [1,n], and Pi is its prefix closure (a prefix placed at i
// belongs to Pi only if some full Lambda word starting at i fits within [1,n])
// together with all empty patterns eps_0..eps_n.
//
// PatternIndex materializes Pi as dense ids grouped by end position, the
// longest-proper-suffix forest on each group, and the suffix-extension
// automaton step(alpha, a) = lsp(alpha * a).  CostTables holds the incremental
// cost tables phi and f plus per-pattern extension tables used by the solvers:
//   phi(alpha) = sum of costs of Pi_deg members that are suffixes of alpha,
//   f(alpha)   = sum of costs of Pi_deg members contained in alpha,
// both computed with O(L * |Pi|) additions in total.

#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace pgi {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Thrown on malformed user input (CLI exit code 2).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when an oracle computation would exceed its size caps (CLI exit code 3).
struct SizeRefusal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Label = std::uint8_t;          // index into an Alphabet
using Word = std::vector<Label>;

// Work counters used by the complexity-guard tests.  Each solver documents the
// exact quantity it counts next to the increment.
struct Counters {
  std::uint64_t table_additions = 0;   // cost-table builds: additions performed
  std::uint64_t binary_inner = 0;      // general DP: innermost combine ops
  std::uint64_t m0_steps = 0;          // anchored forward DP: state transitions
  std::uint64_t vertical_triples = 0;  // vertical pass: (pair,gamma,alpha) updates
  std::uint64_t apsp_relax = 0;        // shortest-path passes: edge relaxations
  std::uint64_t earley_steps = 0;      // one-level scan: per-symbol transitions
};

// Alphabet of single-character labels, in declaration order.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> labels);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(Label a) const { return labels_[a]; }
  // Returns the label id, or throws InputError for an unknown label.
  Label id(const std::string& label) const;
  bool has(const std::string& label) const;

  // Words as strings, valid because labels are single characters.
  Word word_from_string(const std::string& s) const;
  std::string to_string(const Word& w) const;

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<std::string> labels_;
  std::map<std::string, Label> by_label_;
};

// A placed pattern.  For the empty pattern at s: start = s + 1, end = s.
struct Pattern {
  int start = 1;
  int end = 0;
  Word word;

  int len() const { return static_cast<int>(word.size()); }
  bool empty() const { return word.empty(); }
  bool operator==(const Pattern&) const = default;
};

Pattern empty_pattern_at(int s);

// Vocabulary plus placement costs defining f.  Every placement of a vocabulary
// word inside [1,n] is a Pi_deg member; placements without an explicit entry
// cost 0.  Words are interned: costs are keyed by (word index, start).
struct PatternWeights {
  int n = 0;
  Alphabet alphabet;
  std::vector<Word> vocabulary;                 // distinct, non-empty
  std::map<std::pair<int, int>, double> cost;   // (vocab index, start) -> cost

  // Pi_deg placement cost; 0 when no entry exists.
  double placement_cost(int vocab_index, int start) const;
  int find_word(const Word& w) const;           // -1 when absent

  // Throws InputError on duplicate/empty vocabulary words, labels outside the
  // alphabet, costs keyed to out-of-range placements, non-finite costs, or
  // n < 0.
  void validate() const;

  bool operator==(const PatternWeights&) const = default;
};

// Dense index of Pi.  Ids are grouped by end position: block [block_start[s],
// block_start[s+1]) holds Pi_s, sorted by (word length, trie node id), so the
// empty pattern eps_s is always first in its block.
class PatternIndex {
 public:
  // Builds the index; validates `weights` first.
  explicit PatternIndex(const PatternWeights& weights);

  int n() const { return n_; }
  int alphabet_size() const { return d_; }
  const Alphabet& alphabet() const { return alphabet_; }

  int count() const { return count_; }                  // |Pi|
  int block_start(int s) const { return block_start_[s]; }
  int block_end(int s) const { return block_start_[s + 1]; }
  int eps_id(int s) const { return block_start_[s]; }   // eps_s is block head
  int end_of(int id) const { return end_of_[id]; }
  int len_of(int id) const { return trie_depth_[node_of_[id]]; }
  int start_of(int id) const { return end_of_[id] - len_of(id) + 1; }
  int node_of(int id) const { return node_of_[id]; }
  bool is_vocab_word(int id) const { return trie_vocab_[node_of_[id]] >= 0; }
  int vocab_index(int id) const { return trie_vocab_[node_of_[id]]; }

  Pattern pattern(int id) const;                        // materialized copy
  // Id of the pattern with this trie node ending at s, or -1 if not in Pi.
  int id_at(int s, int node) const { return id_at_[static_cast<std::size_t>(s) * trie_size() + node]; }

  // Suffix-extension automaton: id of lsp(alpha * a).  Requires end_of(id) < n.
  int step(int id, Label a) const { return step_[static_cast<std::size_t>(id) * d_ + a]; }

  // Longest-proper-suffix forest on each Pi_s: parent id, -1 for eps_s roots.
  int suffix_parent(int id) const { return suffix_parent_[id]; }
  // Longest strict prefix placement (alpha minus its last symbol); -1 for
  // empty patterns.
  int prefix_of(int id) const { return prefix_of_[id]; }

  // Trie over prefixes of vocabulary words; node 0 is the empty word.
  int trie_size() const { return static_cast<int>(trie_parent_.size()); }
  int trie_parent(int v) const { return trie_parent_[v]; }
  Label trie_symbol(int v) const { return trie_symbol_[v]; }
  int trie_depth(int v) const { return trie_depth_[v]; }
  int trie_child(int v, Label a) const { return trie_child_[static_cast<std::size_t>(v) * d_ + a]; }
  int trie_vocab(int v) const { return trie_vocab_[v]; }   // vocab index or -1
  // Shortest completion: min extra symbols to reach some full vocabulary word.
  int trie_min_tail(int v) const { return trie_min_tail_[v]; }
  // Trie node for a word, or -1 if the word is not a prefix of any vocabulary
  // word.  Throws InputError on labels outside the alphabet.
  int trie_find(const Word& w) const;
  Word trie_word(int v) const;

  // A non-empty word placed with this end position is in Pi iff its node
  // exists and the placement fits: end >= depth and some full-word completion
  // ends by n.  Empty patterns are in Pi at every position by definition.
  bool present(int s, int node) const {
    return node == 0 || (s >= trie_depth_[node] && s + trie_min_tail_[node] <= n_);
  }

  // Sum of word lengths over the vocabulary, and their min/max length.
  long long total_length() const { return total_length_; }
  int max_word_len() const { return max_word_len_; }
  int min_word_len() const { return min_word_len_; }

 private:
  int n_ = 0;
  int d_ = 0;
  Alphabet alphabet_;
  int count_ = 0;
  long long total_length_ = 0;
  int max_word_len_ = 0;
  int min_word_len_ = 0;

  std::vector<int> trie_parent_, trie_depth_, trie_child_, trie_vocab_, trie_min_tail_, trie_fail_;
  std::vector<Label> trie_symbol_;

  std::vector<int> block_start_, end_of_, node_of_, suffix_parent_, prefix_of_;
  std::vector<int32_t> step_, id_at_;
};

// lsp(alpha): the longest suffix of alpha (possibly alpha itself, possibly
// empty) that lies in Pi.  alpha need not be in Pi; it must fit in [1,n].
int lsp(const PatternIndex& index, const Pattern& alpha);

// Partial order used by message tables: beta strictly extends alpha to the
// right iff j_beta > j_alpha, i_beta >= i_alpha, and the two words agree on
// the overlap [i_beta, j_alpha].  Patterns must fit in [1,n] but need not be
// in Pi.
bool precedes(const PatternIndex& index, const Pattern& alpha, const Pattern& beta);

// Incremental cost tables over Pi, plus extension tables over (pattern, trie
// node) pairs:
//   f_ext[alpha][v]  = f(alpha * word(v))   (f of the placement extended by v)
//   lsp_ext[alpha][v] = lsp(alpha * word(v)) as an id
// defined whenever end(alpha) + depth(v) <= n; f_ext is NaN / lsp_ext is -1
// otherwise.  Total additions are counted into counters->table_additions and
// bounded by 8*L*|Pi| + 8*|Pi|.
struct CostTables {
  std::vector<double> phi;       // per id
  std::vector<double> f;         // per id
  std::vector<double> f_ext;     // id * trie_size + node
  std::vector<int32_t> lsp_ext;  // id * trie_size + node
  int trie_size = 0;

  double f_pair(int id, int node) const { return f_ext[static_cast<std::size_t>(id) * trie_size + node]; }
  int lsp_pair(int id, int node) const { return lsp_ext[static_cast<std::size_t>(id) * trie_size + node]; }
};

CostTables compute_cost_tables(const PatternIndex& index, const PatternWeights& weights,
                               Counters* counters = nullptr);

}  // namespace pgi
