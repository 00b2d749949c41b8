// Grammar validation, binding to the typed form, interaction-grammar
// compilation, and vocabulary normalization.

#include "pgi/grammar.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace pgi {

WeightSpec WeightSpec::scalar(double w) {
  if (std::isnan(w)) throw InputError("rule weight is NaN");
  WeightSpec s;
  s.kind_ = Kind::Scalar;
  s.scalar_ = w;
  return s;
}

WeightSpec WeightSpec::separable(std::vector<double> start_part, std::vector<double> end_part) {
  if (start_part.size() != end_part.size() || start_part.empty())
    throw InputError("separable weight parts must have equal, non-zero length");
  WeightSpec s;
  s.kind_ = Kind::Separable;
  // Shift to 1-based indexing.
  s.start_part_.push_back(0.0);
  s.end_part_.push_back(0.0);
  s.start_part_.insert(s.start_part_.end(), start_part.begin(), start_part.end());
  s.end_part_.insert(s.end_part_.end(), end_part.begin(), end_part.end());
  return s;
}

WeightSpec WeightSpec::table(std::vector<std::vector<double>> rows) {
  int n = static_cast<int>(rows.size());
  for (int i = 1; i <= n; ++i) {
    if (static_cast<int>(rows[i - 1].size()) != n - i + 1)
      throw InputError("weight table row " + std::to_string(i) + " must have " +
                       std::to_string(n - i + 1) + " entries");
  }
  WeightSpec s;
  s.kind_ = Kind::Table;
  s.rows_ = std::move(rows);
  return s;
}

double WeightSpec::scalar_value() const {
  if (kind_ != Kind::Scalar) throw std::logic_error("weight is not a scalar");
  return scalar_;
}

int WeightSpec::positions() const {
  switch (kind_) {
    case Kind::Scalar: return 0;
    case Kind::Separable: return static_cast<int>(start_part_.size()) - 1;
    case Kind::Table: return static_cast<int>(rows_.size());
  }
  return 0;
}

double WeightSpec::eval(int i, int j) const {
  switch (kind_) {
    case Kind::Scalar: return scalar_;
    case Kind::Separable:
      if (i < 1 || j < i || j >= static_cast<int>(start_part_.size()))
        throw InputError("weight evaluated outside its position range");
      return start_part_[i] + end_part_[j];
    case Kind::Table:
      if (i < 1 || j < i || j > static_cast<int>(rows_.size()))
        throw InputError("weight evaluated outside its position range");
      return rows_[i - 1][j - i];
  }
  return 0.0;
}

namespace {

bool word_ok(const std::string& w, const Alphabet& alphabet) {
  try {
    alphabet.word_from_string(w);
    return true;
  } catch (const InputError&) {
    return false;
  }
}

}  // namespace

std::vector<GrammarViolation> validate_cnf(const RawGrammar& g, const Alphabet& alphabet,
                                           const std::vector<Word>* vocabulary) {
  std::vector<GrammarViolation> out;
  auto add = [&](const std::string& code, const std::string& msg) { out.push_back({code, msg}); };

  std::set<std::string> nts(g.nonterminals.begin(), g.nonterminals.end());
  if (nts.size() != g.nonterminals.size()) add("duplicate-nonterminal", "nonterminal declared twice");
  if (!nts.count(g.start)) add("bad-start", "start symbol '" + g.start + "' is not a declared nonterminal");

  for (std::size_t r = 0; r < g.rules.size(); ++r) {
    const RawRule& rule = g.rules[r];
    const std::string where = "rule #" + std::to_string(r) + " (head '" + rule.head + "')";
    if (!nts.count(rule.head)) add("unknown-symbol", where + ": head is not a declared nonterminal");
    int forms = (!rule.body.empty() ? 1 : 0) + (rule.word.has_value() ? 1 : 0) + (rule.epsilon ? 1 : 0);
    if (forms != 1) {
      add("bad-rule-shape", where + ": exactly one of body / word / epsilon is required");
      continue;
    }
    if (!rule.body.empty()) {
      if (rule.body.size() != 2)
        add("bad-rule-shape", where + ": body has " + std::to_string(rule.body.size()) +
                                  " symbols; binary rules require exactly 2");
      for (const std::string& sym : rule.body)
        if (!nts.count(sym)) add("unknown-symbol", where + ": body symbol '" + sym + "' is not declared");
    } else if (rule.word.has_value()) {
      if (rule.word->empty()) {
        add("bad-rule-shape", where + ": terminal word is empty");
      } else if (!word_ok(*rule.word, alphabet)) {
        add("unknown-label", where + ": terminal word uses a label outside the alphabet");
      } else if (vocabulary) {
        Word w = alphabet.word_from_string(*rule.word);
        if (std::find(vocabulary->begin(), vocabulary->end(), w) == vocabulary->end())
          add("word-not-in-vocabulary", where + ": terminal word '" + *rule.word +
                                            "' is not a vocabulary word");
      }
    } else if (rule.epsilon && rule.head != g.start) {
      add("epsilon-not-start", where + ": epsilon rules are only allowed on the start symbol");
    }
    if (rule.epsilon && rule.weight.kind() != WeightSpec::Kind::Scalar)
      add("bad-rule-shape", where + ": epsilon rules take a scalar weight");
  }

  // Reachability from the start symbol over well-formed rules.
  std::set<std::string> reachable;
  if (nts.count(g.start)) {
    reachable.insert(g.start);
    bool grew = true;
    while (grew) {
      grew = false;
      for (const RawRule& rule : g.rules) {
        if (!reachable.count(rule.head)) continue;
        for (const std::string& sym : rule.body)
          if (nts.count(sym) && reachable.insert(sym).second) grew = true;
      }
    }
    for (const std::string& nt : g.nonterminals)
      if (!reachable.count(nt))
        add("unreachable-nonterminal", "nonterminal '" + nt + "' is unreachable from the start symbol");
  }
  return out;
}

CnfGrammar bind_grammar(const RawGrammar& raw, const Alphabet& alphabet) {
  for (const GrammarViolation& v : validate_cnf(raw, alphabet))
    if (v.code != "unreachable-nonterminal") throw InputError("invalid grammar: " + v.message);

  CnfGrammar g;
  g.names = raw.nonterminals;
  std::map<std::string, int> id;
  for (std::size_t i = 0; i < g.names.size(); ++i) id[g.names[i]] = static_cast<int>(i);
  g.start = id.at(raw.start);
  for (const RawRule& rule : raw.rules) {
    if (!rule.body.empty()) {
      g.binary.push_back({id.at(rule.head), id.at(rule.body[0]), id.at(rule.body[1]), rule.weight});
    } else if (rule.word.has_value()) {
      g.terminal.push_back({id.at(rule.head), alphabet.word_from_string(*rule.word), rule.weight});
    } else {
      if (g.epsilon_weight.has_value()) throw InputError("invalid grammar: duplicate epsilon rule");
      g.epsilon_weight = rule.weight.scalar_value();
    }
  }
  return g;
}

int CnfGrammar::find(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return -1;
}

double Derivation::total_weight() const {
  double t = 0.0;
  for (const Node& n : nodes) t += n.weight;
  return t;
}

namespace {

void format_node(const Derivation& d, const CnfGrammar& g, const Alphabet& alphabet, const Word& x,
                 int node, std::string& out) {
  const Derivation::Node& nd = d.nodes[node];
  switch (nd.kind) {
    case Derivation::Node::Kind::Epsilon:
      out += "(" + g.names[g.start] + " eps)";
      return;
    case Derivation::Node::Kind::Terminal: {
      const auto& rule = g.terminal[nd.rule];
      Word span(x.begin() + (nd.i - 1), x.begin() + nd.j);
      out += "(" + g.names[rule.head] + " " + alphabet.to_string(span) + ")";
      return;
    }
    case Derivation::Node::Kind::Binary: {
      const auto& rule = g.binary[nd.rule];
      out += "(" + g.names[rule.head] + " ";
      format_node(d, g, alphabet, x, nd.left, out);
      out += " ";
      format_node(d, g, alphabet, x, nd.right, out);
      out += ")";
      return;
    }
  }
}

}  // namespace

std::string format_derivation(const Derivation& d, const CnfGrammar& g, const Alphabet& alphabet,
                              const Word& x) {
  if (d.root < 0) return "(none)";
  std::string out;
  format_node(d, g, alphabet, x, d.root, out);
  return out;
}

namespace {

// Returns the head nonterminal of a checked subtree, or -1 on failure.
int check_node(const Derivation& d, const CnfGrammar& g, const Word& x, int node,
               std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = "node " + std::to_string(node) + ": " + msg;
    return -1;
  };
  if (node < 0 || node >= static_cast<int>(d.nodes.size())) return fail("child id out of range");
  const Derivation::Node& nd = d.nodes[node];
  switch (nd.kind) {
    case Derivation::Node::Kind::Epsilon: {
      if (!g.epsilon_weight.has_value()) return fail("epsilon rule absent from grammar");
      if (!x.empty()) return fail("epsilon node over a non-empty string");
      if (nd.weight != *g.epsilon_weight) return fail("epsilon weight mismatch");
      return g.start;
    }
    case Derivation::Node::Kind::Terminal: {
      if (nd.rule < 0 || nd.rule >= static_cast<int>(g.terminal.size()))
        return fail("terminal rule id out of range");
      const auto& rule = g.terminal[nd.rule];
      int len = static_cast<int>(rule.word.size());
      if (nd.j - nd.i + 1 != len) return fail("terminal span length mismatch");
      if (nd.i < 1 || nd.j > static_cast<int>(x.size())) return fail("terminal span out of range");
      if (!std::equal(rule.word.begin(), rule.word.end(), x.begin() + (nd.i - 1)))
        return fail("terminal word differs from the string");
      if (nd.weight != rule.weight.eval(nd.i, nd.j)) return fail("terminal weight mismatch");
      return rule.head;
    }
    case Derivation::Node::Kind::Binary: {
      if (nd.rule < 0 || nd.rule >= static_cast<int>(g.binary.size()))
        return fail("binary rule id out of range");
      const auto& rule = g.binary[nd.rule];
      if (nd.weight != rule.weight.eval(nd.i, nd.j)) return fail("binary weight mismatch");
      int lh = check_node(d, g, x, nd.left, why);
      if (lh < 0) return -1;
      int rh = check_node(d, g, x, nd.right, why);
      if (rh < 0) return -1;
      if (lh != rule.left || rh != rule.right) return fail("child heads do not match the rule");
      const Derivation::Node& l = d.nodes[nd.left];
      const Derivation::Node& r = d.nodes[nd.right];
      if (l.i != nd.i || r.j != nd.j || l.j + 1 != r.i)
        return fail("child spans do not partition the node span");
      return rule.head;
    }
  }
  return fail("unknown node kind");
}

}  // namespace

bool check_derivation(const Derivation& d, const CnfGrammar& g, const Word& x, std::string* why) {
  if (d.root < 0) {
    if (why) *why = "derivation has no root";
    return false;
  }
  int head = check_node(d, g, x, d.root, why);
  if (head < 0) return false;
  if (head != g.start) {
    if (why) *why = "root head is not the start symbol";
    return false;
  }
  const Derivation::Node& root = d.nodes[d.root];
  bool whole = x.empty() ? root.kind == Derivation::Node::Kind::Epsilon
                         : (root.i == 1 && root.j == static_cast<int>(x.size()));
  if (!whole) {
    if (why) *why = "root span does not cover the whole string";
    return false;
  }
  return true;
}

void validate_interaction(const InteractionGrammar& ig, const Alphabet& alphabet) {
  if (ig.depth < 1) throw InputError("interaction depth must be at least 1");
  for (const InteractionPair& p : ig.pairs) {
    if (p.left.empty() || p.right.empty()) throw InputError("interaction pair words must be non-empty");
    for (Label a : p.left)
      if (a >= alphabet.size()) throw InputError("interaction pair word uses label outside alphabet");
    for (Label a : p.right)
      if (a >= alphabet.size()) throw InputError("interaction pair word uses label outside alphabet");
    if (static_cast<int>(p.theta.size()) != ig.depth)
      throw InputError("interaction pair must carry exactly one weight per level 1..depth");
  }
}

CnfGrammar compile_interaction_grammar(const InteractionGrammar& ig, const Alphabet& alphabet) {
  validate_interaction(ig, alphabet);
  const int d = ig.depth;
  CnfGrammar g;

  // Level nonterminals L0..Ld (start Ld), one carrier per distinct pair word,
  // and one middle helper per (level, pair).
  std::vector<int> level(d + 1);
  for (int k = 0; k <= d; ++k) {
    level[k] = static_cast<int>(g.names.size());
    g.names.push_back("L" + std::to_string(k));
  }
  std::map<Word, int> carrier;
  auto carrier_of = [&](const Word& w) {
    auto it = carrier.find(w);
    if (it != carrier.end()) return it->second;
    int idx = static_cast<int>(g.names.size());
    g.names.push_back("X" + alphabet.to_string(w));
    carrier.emplace(w, idx);
    return idx;
  };
  std::vector<std::vector<int>> helper(d + 1, std::vector<int>(ig.pairs.size(), -1));
  for (int k = 1; k <= d; ++k) {
    for (std::size_t p = 0; p < ig.pairs.size(); ++p) {
      carrier_of(ig.pairs[p].left);
      carrier_of(ig.pairs[p].right);
      helper[k][p] = static_cast<int>(g.names.size());
      g.names.push_back("Y" + std::to_string(k) + "_" + std::to_string(p));
    }
  }
  g.start = level[d];

  // Splits: level k may split at any level j <= k (unit chains collapsed).
  for (int k = 0; k <= d; ++k)
    for (int j = 0; j <= k; ++j)
      g.binary.push_back({level[k], level[j], level[j], WeightSpec::scalar(0.0)});
  // Wraps: level k may apply any level-j interaction, j <= k.  The weight
  // rides on the outer rule so position tables see the wrapped span; the
  // u.v variant covers empty middles (interior epsilons are eliminated).
  for (int k = 1; k <= d; ++k) {
    for (int j = 1; j <= k; ++j) {
      for (std::size_t p = 0; p < ig.pairs.size(); ++p) {
        const InteractionPair& pr = ig.pairs[p];
        g.binary.push_back({level[k], carrier_of(pr.left), helper[j][p], pr.theta[j - 1]});
        g.binary.push_back({level[k], carrier_of(pr.left), carrier_of(pr.right), pr.theta[j - 1]});
      }
    }
  }
  // Middle helpers: level j - 1 middle followed by the right word.
  for (int j = 1; j <= d; ++j)
    for (std::size_t p = 0; p < ig.pairs.size(); ++p)
      g.binary.push_back({helper[j][p], level[j - 1], carrier_of(ig.pairs[p].right),
                          WeightSpec::scalar(0.0)});
  // Terminals: every level derives single symbols for free; carriers read
  // their words.
  for (int k = 0; k <= d; ++k)
    for (Label a = 0; a < alphabet.size(); ++a)
      g.terminal.push_back({level[k], Word{a}, WeightSpec::scalar(0.0)});
  for (const auto& [w, idx] : carrier) g.terminal.push_back({idx, w, WeightSpec::scalar(0.0)});
  // The whole empty string derives for free.
  g.epsilon_weight = 0.0;
  return g;
}

namespace {

PatternWeights add_missing_words(PatternWeights weights, const std::vector<Word>& words) {
  for (const Word& w : words) {
    if (w.empty()) throw InputError("terminal words must be non-empty");
    if (weights.find_word(w) < 0) weights.vocabulary.push_back(w);
  }
  return weights;
}

}  // namespace

PatternWeights normalize_terminal_words(PatternWeights weights, const CnfGrammar& g) {
  std::vector<Word> words;
  for (const auto& r : g.terminal) words.push_back(r.word);
  return add_missing_words(std::move(weights), words);
}

PatternWeights normalize_terminal_words(PatternWeights weights, const InteractionGrammar& ig) {
  std::vector<Word> words;
  for (const auto& p : ig.pairs) {
    words.push_back(p.left);
    words.push_back(p.right);
  }
  return add_missing_words(std::move(weights), words);
}

}  // namespace pgi
