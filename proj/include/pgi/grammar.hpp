// Weighted grammars in extended Chomsky normal form (binary rules A -> BC,
// terminal rules A -> w with w a non-empty word, optionally S -> epsilon), and
// the bounded-depth interaction rule system that compiles into one.
//
// Rule weights may depend on the spanned positions: nu(r, i, j) is a scalar, a
// separable sum start_part[i] + end_part[j], or a dense triangular table.  The
// cost of a derivation is the sum of its rule weights, each evaluated on the
// span the rule application covers; the grammar cost of a string is the least
// derivation cost.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pgi/pattern.hpp"

namespace pgi {

// Position-dependent rule weight.
class WeightSpec {
 public:
  enum class Kind { Scalar, Separable, Table };

  WeightSpec() : kind_(Kind::Scalar), scalar_(0.0) {}
  static WeightSpec scalar(double w);
  // Parts are indexed by absolute position 1..n.
  static WeightSpec separable(std::vector<double> start_part, std::vector<double> end_part);
  // rows[i-1] holds nu(i, j) for j = i..n (ragged upper triangle).
  static WeightSpec table(std::vector<std::vector<double>> rows);

  Kind kind() const { return kind_; }
  double scalar_value() const;
  // Requires 1 <= i <= j <= n for positional kinds.
  double eval(int i, int j) const;
  int positions() const;  // n for positional kinds, 0 for scalars
  const std::vector<double>& start_part() const { return start_part_; }
  const std::vector<double>& end_part() const { return end_part_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }

  bool operator==(const WeightSpec&) const = default;

 private:
  Kind kind_;
  double scalar_ = 0.0;
  std::vector<double> start_part_, end_part_;      // size n+1, index 0 unused
  std::vector<std::vector<double>> rows_;          // ragged triangle
};

// File-level grammar form used for validation; arities are unchecked here so
// that malformed rules can be reported rather than be unrepresentable.
struct RawRule {
  std::string head;
  std::vector<std::string> body;      // nonterminal names (binary when size 2)
  std::optional<std::string> word;    // terminal word, string form
  bool epsilon = false;
  WeightSpec weight;
};

struct RawGrammar {
  std::vector<std::string> nonterminals;
  std::string start;
  std::vector<RawRule> rules;
};

struct GrammarViolation {
  std::string code;     // stable identifier, e.g. "bad-rule-shape"
  std::string message;  // human-readable description
};

// Checks extended-CNF well-formedness and reports every violation: bad rule
// shapes (arity != 2, mixed or missing body forms), unknown symbols or labels,
// epsilon on a non-start head, unreachable nonterminals, and -- when a
// vocabulary is supplied -- terminal words missing from it.
std::vector<GrammarViolation> validate_cnf(const RawGrammar& g, const Alphabet& alphabet,
                                           const std::vector<Word>* vocabulary = nullptr);

// Typed extended-CNF grammar; shape-valid by construction.
struct CnfGrammar {
  std::vector<std::string> names;  // nonterminal names
  int start = 0;

  struct BinaryRule {
    int head, left, right;
    WeightSpec weight;
    bool operator==(const BinaryRule&) const = default;
  };
  struct TerminalRule {
    int head;
    Word word;  // non-empty
    WeightSpec weight;
    bool operator==(const TerminalRule&) const = default;
  };

  std::vector<BinaryRule> binary;
  std::vector<TerminalRule> terminal;
  std::optional<double> epsilon_weight;  // S -> epsilon, whole-string only

  int find(const std::string& name) const;
  int rule_count() const { return static_cast<int>(binary.size() + terminal.size()); }
  bool operator==(const CnfGrammar&) const = default;
};

// Validates `raw` (unreachable nonterminals are tolerated; everything else
// throws InputError with the first violation) and converts to the typed form.
CnfGrammar bind_grammar(const RawGrammar& raw, const Alphabet& alphabet);

// A derivation tree flattened into nodes; weights are the resolved per-span
// rule weights, so the derivation's grammar cost is their plain sum.
struct Derivation {
  struct Node {
    enum class Kind { Binary, Terminal, Epsilon };
    Kind kind = Kind::Terminal;
    int rule = -1;  // index into CnfGrammar::binary or ::terminal
    int i = 1, j = 0;
    double weight = 0.0;
    int left = -1, right = -1;  // child node ids for binary applications
  };
  std::vector<Node> nodes;
  int root = -1;

  double total_weight() const;
  bool empty() const { return root < 0; }
};

// Renders a derivation as a bracketed tree over the string's labels.
std::string format_derivation(const Derivation& d, const CnfGrammar& g, const Alphabet& alphabet,
                              const Word& x);

// Structural check that `d` is a valid derivation of x under g: spans nest and
// partition exactly, rule children match, terminal words match x, and every
// node weight equals its rule weight evaluated on the node's span.  On
// failure returns false and, when `why` is given, an explanation.
bool check_derivation(const Derivation& d, const CnfGrammar& g, const Word& x,
                      std::string* why = nullptr);

// Least derivation cost of x (kInf when x is underivable); fills `out` with an
// optimal derivation when given.  Ties: first-encountered under terminal rules
// in declaration order, then binary rules in declaration order, then split
// positions ascending.
double cyk_min_parse(const Word& x, const CnfGrammar& g, Derivation* out = nullptr);

// log sum over all derivations of exp(-cost); -kInf when x is underivable.
double cyk_log_inside(const Word& x, const CnfGrammar& g);

// All derivations of x, in the cyk_min_parse tie order.  Throws SizeRefusal
// when the count exceeds `cap`.
std::vector<Derivation> enumerate_derivations(const Word& x, const CnfGrammar& g, std::size_t cap);

// Bounded-depth interaction rule system: levels 0..depth where level 0
// derives any string for free and level k can split, defer to level k-1, or
// wrap a level k-1 string as u . (level k-1) . v for a pair (u, v) at weight
// theta_k(u, v), position-evaluable on the wrapped span.
struct InteractionPair {
  Word left, right;                // non-empty
  std::vector<WeightSpec> theta;   // theta[k-1] is the level-k weight
  bool operator==(const InteractionPair&) const = default;
};

struct InteractionGrammar {
  int depth = 1;
  std::vector<InteractionPair> pairs;
  bool operator==(const InteractionGrammar&) const = default;
};

// Shape checks: depth >= 1, non-empty pair words over the alphabet, exactly
// depth weights per pair.  Throws InputError.
void validate_interaction(const InteractionGrammar& ig, const Alphabet& alphabet);

// Compiles the interaction system into an equivalent extended-CNF grammar
// (equal least derivation costs for every string; the empty string derives at
// cost 0).  Interior epsilons are eliminated via explicit u.v variants and
// unit chains via zero-weight rule copies, so the result is genuinely
// extended-CNF.
CnfGrammar compile_interaction_grammar(const InteractionGrammar& ig, const Alphabet& alphabet);

// Returns `weights` augmented so that every terminal-rule word (or interaction
// pair word) occurs in the vocabulary; added words carry no cost entries, so
// every placement of them costs 0 and all energies are unchanged.
PatternWeights normalize_terminal_words(PatternWeights weights, const CnfGrammar& g);
PatternWeights normalize_terminal_words(PatternWeights weights, const InteractionGrammar& ig);

}  // namespace pgi
