// Strict JSON instance parser and canonical serializer.  Every object reader
// tracks which keys it consumed and rejects the rest, so typos fail loudly;
// every error message carries the field path that produced it.

#include "pgi/io.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace pgi {
namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Reading

// Object wrapper that records consumed keys; done() rejects the leftovers.
class ObjReader {
 public:
  ObjReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw InputError(where_ + " must be an object");
  }

  const json* find(const std::string& key) {
    used_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const json& get(const std::string& key) {
    const json* p = find(key);
    if (!p) throw InputError(where_ + ": missing required field \"" + key + "\"");
    return *p;
  }

  void done() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key()))
        throw InputError(where_ + ": unknown field \"" + it.key() + "\"");
  }

  const std::string& where() const { return where_; }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> used_;
};

std::string read_string(const json& j, const std::string& where) {
  if (!j.is_string()) throw InputError(where + " must be a string");
  return j.get<std::string>();
}

int read_int(const json& j, const std::string& where, int min_value) {
  if (!j.is_number_integer())
    throw InputError(where + " must be an integer");
  auto v = j.get<std::int64_t>();
  if (v < min_value || v > std::numeric_limits<int>::max())
    throw InputError(where + " is out of range (got " + std::to_string(v) + ")");
  return static_cast<int>(v);
}

// A finite number; "inf"/"+inf" are not accepted here.
double read_finite(const json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + " must be a finite number");
  double v = j.get<double>();
  if (!std::isfinite(v)) throw InputError(where + " must be a finite number");
  return v;
}

// A weight entry: a finite number or the string "inf" / "+inf".
double read_weight_entry(const json& j, const std::string& where) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    throw InputError(where + ": the only string weight forms are \"inf\" and \"+inf\"");
  }
  if (!j.is_number())
    throw InputError(where + " must be a number or \"inf\"");
  double v = j.get<double>();
  if (std::isnan(v)) throw InputError(where + " must not be NaN");
  if (v == -kInf) throw InputError(where + " must not be -inf");
  return v;
}

std::vector<double> read_weight_array(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(read_weight_entry(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

// The uniform weight union: scalar number, "inf", separable object, or a
// staircase table.  Positional forms must cover exactly n positions.
WeightSpec read_weight(const json& j, int n, const std::string& where) {
  if (j.is_number() || j.is_string())
    return WeightSpec::scalar(read_weight_entry(j, where));
  if (j.is_object()) {
    ObjReader o(j, where);
    std::vector<double> start = read_weight_array(o.get("start"), where + ".start");
    std::vector<double> end = read_weight_array(o.get("end"), where + ".end");
    o.done();
    if (start.empty()) throw InputError(where + ".start must be non-empty");
    WeightSpec w = WeightSpec::separable(std::move(start), std::move(end));
    if (w.positions() != n)
      throw InputError(where + " covers " + std::to_string(w.positions()) +
                       " positions but the instance has n = " + std::to_string(n));
    return w;
  }
  if (j.is_array()) {
    if (j.empty()) throw InputError(where + ": a table weight must have at least one row");
    std::vector<std::vector<double>> rows;
    rows.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
      rows.push_back(read_weight_array(j[i], where + "[" + std::to_string(i) + "]"));
    WeightSpec w = WeightSpec::table(std::move(rows));
    if (w.positions() != n)
      throw InputError(where + " covers " + std::to_string(w.positions()) +
                       " positions but the instance has n = " + std::to_string(n));
    return w;
  }
  throw InputError(where + " must be a number, \"inf\", a {start, end} object, or a table array");
}

Alphabet read_alphabet(const json& j) {
  if (!j.is_array() || j.empty())
    throw InputError("alphabet must be a non-empty array of labels");
  std::vector<std::string> labels;
  labels.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::string l = read_string(j[i], "alphabet[" + std::to_string(i) + "]");
    if (l.size() != 1)
      throw InputError("alphabet[" + std::to_string(i) + "]: labels must be single characters (got \"" +
                       l + "\")");
    labels.push_back(std::move(l));
  }
  return Alphabet(std::move(labels));  // rejects duplicates
}

void read_patterns(const json& j, int n, PatternWeights& pw) {
  if (!j.is_array()) throw InputError("patterns must be an array");
  std::map<Word, int> interned;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string where = "patterns[" + std::to_string(k) + "]";
    ObjReader o(j[k], where);
    std::string text = read_string(o.get("word"), where + ".word");
    Word w = pw.alphabet.word_from_string(text);  // rejects unknown labels
    if (w.empty()) throw InputError(where + ".word must be non-empty");
    auto [it, fresh] = interned.emplace(w, static_cast<int>(pw.vocabulary.size()));
    if (fresh) pw.vocabulary.push_back(w);
    const int vi = it->second;
    const int len = static_cast<int>(w.size());

    const json* pos = o.find("position");
    const json* cost = o.find("cost");
    o.done();
    if (pos && !cost)
      throw InputError(where + ": a position requires a cost");
    if (!cost) continue;

    double c = read_finite(*cost, where + ".cost");
    auto add = [&](int start) {
      if (!pw.cost.emplace(std::make_pair(vi, start), c).second)
        throw InputError(where + ": duplicate cost entry for word \"" + text + "\" at position " +
                         std::to_string(start));
    };
    if (pos) {
      int start = read_int(*pos, where + ".position", 1);
      if (start + len - 1 > n)
        throw InputError(where + ": placement [" + std::to_string(start) + ", " +
                         std::to_string(start + len - 1) + "] does not fit within n = " +
                         std::to_string(n));
      add(start);
    } else {
      for (int start = 1; start + len - 1 <= n; ++start) add(start);
    }
  }
}

CnfGrammar read_cnf(ObjReader& g, int n, const Alphabet& alphabet) {
  RawGrammar raw;
  const json& nts = g.get("nonterminals");
  if (!nts.is_array()) throw InputError("grammar.nonterminals must be an array of strings");
  for (std::size_t i = 0; i < nts.size(); ++i)
    raw.nonterminals.push_back(read_string(nts[i], "grammar.nonterminals[" + std::to_string(i) + "]"));
  raw.start = read_string(g.get("start"), "grammar.start");

  const json& rules = g.get("rules");
  if (!rules.is_array()) throw InputError("grammar.rules must be an array");
  for (std::size_t r = 0; r < rules.size(); ++r) {
    const std::string where = "grammar.rules[" + std::to_string(r) + "]";
    ObjReader o(rules[r], where);
    RawRule rr;
    rr.head = read_string(o.get("head"), where + ".head");
    if (const json* body = o.find("body")) {
      if (!body->is_array()) throw InputError(where + ".body must be an array of two nonterminals");
      for (std::size_t i = 0; i < body->size(); ++i)
        rr.body.push_back(read_string((*body)[i], where + ".body[" + std::to_string(i) + "]"));
    }
    if (const json* word = o.find("word")) rr.word = read_string(*word, where + ".word");
    if (const json* eps = o.find("epsilon")) {
      if (!eps->is_boolean()) throw InputError(where + ".epsilon must be a boolean");
      rr.epsilon = eps->get<bool>();
    }
    rr.weight = read_weight(o.get("weight"), n, where + ".weight");
    o.done();
    raw.rules.push_back(std::move(rr));
  }
  g.done();
  return bind_grammar(raw, alphabet);  // shape, symbol, and epsilon checks
}

InteractionGrammar read_interaction(ObjReader& g, int n, const Alphabet& alphabet) {
  InteractionGrammar ig;
  ig.depth = read_int(g.get("depth"), "grammar.depth", 1);
  const json& pairs = g.get("pairs");
  if (!pairs.is_array()) throw InputError("grammar.pairs must be an array");
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const std::string where = "grammar.pairs[" + std::to_string(p) + "]";
    ObjReader o(pairs[p], where);
    InteractionPair pr;
    pr.left = alphabet.word_from_string(read_string(o.get("left"), where + ".left"));
    pr.right = alphabet.word_from_string(read_string(o.get("right"), where + ".right"));
    const json& weights = o.get("weights");
    if (!weights.is_array() || static_cast<int>(weights.size()) != ig.depth)
      throw InputError(where + ".weights must be an array of exactly depth = " +
                       std::to_string(ig.depth) + " weight values");
    for (std::size_t k = 0; k < weights.size(); ++k)
      pr.theta.push_back(read_weight(weights[k], n, where + ".weights[" + std::to_string(k) + "]"));
    o.done();
    ig.pairs.push_back(std::move(pr));
  }
  g.done();
  validate_interaction(ig, alphabet);
  return ig;
}

// ---------------------------------------------------------------------------
// Writing

json weight_entry_to_json(double v) {
  if (std::isnan(v) || v == -kInf)
    throw InputError("cannot serialize a NaN or -inf weight");
  if (v == kInf) return json("inf");
  return json(v);
}

json weight_to_json(const WeightSpec& w) {
  switch (w.kind()) {
    case WeightSpec::Kind::Scalar:
      return weight_entry_to_json(w.scalar_value());
    case WeightSpec::Kind::Separable: {
      json out = json::object();
      json start = json::array(), end = json::array();
      for (int i = 1; i <= w.positions(); ++i) {
        start.push_back(weight_entry_to_json(w.start_part()[i]));
        end.push_back(weight_entry_to_json(w.end_part()[i]));
      }
      out["start"] = std::move(start);
      out["end"] = std::move(end);
      return out;
    }
    case WeightSpec::Kind::Table: {
      json rows = json::array();
      for (const auto& row : w.rows()) {
        json r = json::array();
        for (double v : row) r.push_back(weight_entry_to_json(v));
        rows.push_back(std::move(r));
      }
      return rows;
    }
  }
  throw std::logic_error("unknown weight kind");
}

json patterns_to_json(const PatternWeights& pw) {
  // Entries grouped by vocabulary word in interning order, placements
  // ascending, so parsing the output recreates the identical structure.
  std::vector<std::vector<std::pair<int, double>>> entries(pw.vocabulary.size());
  for (const auto& [key, c] : pw.cost) entries[key.first].push_back({key.second, c});
  json out = json::array();
  for (std::size_t vi = 0; vi < pw.vocabulary.size(); ++vi) {
    const std::string text = pw.alphabet.to_string(pw.vocabulary[vi]);
    if (entries[vi].empty()) {
      out.push_back(json{{"word", text}});
      continue;
    }
    for (const auto& [start, c] : entries[vi]) {
      if (!std::isfinite(c)) throw InputError("cannot serialize a non-finite placement cost");
      out.push_back(json{{"word", text}, {"position", start}, {"cost", c}});
    }
  }
  return out;
}

json grammar_to_json(const Instance& inst) {
  const Alphabet& alphabet = inst.weights.alphabet;
  json g = json::object();
  if (inst.is_cnf()) {
    const CnfGrammar& cg = inst.cnf();
    g["kind"] = "cnf";
    g["nonterminals"] = cg.names;
    g["start"] = cg.names.at(cg.start);
    json rules = json::array();
    for (const auto& r : cg.binary)
      rules.push_back(json{{"head", cg.names.at(r.head)},
                           {"body", json::array({cg.names.at(r.left), cg.names.at(r.right)})},
                           {"weight", weight_to_json(r.weight)}});
    for (const auto& r : cg.terminal)
      rules.push_back(json{{"head", cg.names.at(r.head)},
                           {"word", alphabet.to_string(r.word)},
                           {"weight", weight_to_json(r.weight)}});
    if (cg.epsilon_weight.has_value())
      rules.push_back(json{{"head", cg.names.at(cg.start)},
                           {"epsilon", true},
                           {"weight", weight_entry_to_json(*cg.epsilon_weight)}});
    g["rules"] = std::move(rules);
  } else {
    const InteractionGrammar& ig = inst.interaction();
    g["kind"] = "interaction";
    g["depth"] = ig.depth;
    json pairs = json::array();
    for (const auto& pr : ig.pairs) {
      json weights = json::array();
      for (const auto& w : pr.theta) weights.push_back(weight_to_json(w));
      pairs.push_back(json{{"left", alphabet.to_string(pr.left)},
                           {"right", alphabet.to_string(pr.right)},
                           {"weights", std::move(weights)}});
    }
    g["pairs"] = std::move(pairs);
  }
  return g;
}

}  // namespace

Instance parse_instance_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // Convert the byte offset into a line/column diagnostic.
    std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    if (byte > text.size()) byte = text.size();
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError("instance file is not valid JSON (line " + std::to_string(line) + ", column " +
                     std::to_string(col) + "): " + e.what());
  }

  ObjReader top(j, "instance");
  Instance inst;
  inst.weights.n = read_int(top.get("n"), "n", 0);
  inst.weights.alphabet = read_alphabet(top.get("alphabet"));
  read_patterns(top.get("patterns"), inst.weights.n, inst.weights);

  ObjReader g(top.get("grammar"), "grammar");
  std::string kind = read_string(g.get("kind"), "grammar.kind");
  if (kind == "cnf") {
    inst.grammar = read_cnf(g, inst.weights.n, inst.weights.alphabet);
  } else if (kind == "interaction") {
    inst.grammar = read_interaction(g, inst.weights.n, inst.weights.alphabet);
  } else {
    throw InputError("grammar.kind must be \"cnf\" or \"interaction\" (got \"" + kind + "\")");
  }
  top.done();
  inst.weights.validate();
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance_text(buf.str());
}

std::string serialize_instance(const Instance& inst) {
  inst.weights.validate();  // never emit a file the parser would reject
  json out = json::object();
  out["n"] = inst.weights.n;
  json alphabet = json::array();
  for (int a = 0; a < inst.weights.alphabet.size(); ++a)
    alphabet.push_back(inst.weights.alphabet.label(static_cast<Label>(a)));
  out["alphabet"] = std::move(alphabet);
  out["patterns"] = patterns_to_json(inst.weights);
  out["grammar"] = grammar_to_json(inst);
  return out.dump(2) + "\n";
}

void save_instance(const Instance& inst, const std::string& path) {
  const std::string text = serialize_instance(inst);
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw std::runtime_error("cannot write instance file: " + path);
  outf << text;
  if (!outf) throw std::runtime_error("failed writing instance file: " + path);
}

}  // namespace pgi
