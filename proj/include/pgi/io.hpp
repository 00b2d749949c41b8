// Instance files: a strict JSON schema for pattern costs plus a grammar
// (extended-CNF or bounded-depth interaction form), with a canonical
// serializer such that parse -> serialize -> parse is the identity and
// serializing twice yields byte-identical text.
//
// Schema (all fields required unless noted; unknown fields are rejected):
//
//   {
//     "n": <int >= 0>,                      // string length
//     "alphabet": ["a", "b", ...],          // distinct single-character labels
//     "patterns": [                         // vocabulary + placement costs
//       {"word": "ab"},                     //   vocabulary word, no costs
//       {"word": "ab", "cost": 1.5},        //   every placement costs 1.5
//       {"word": "ab", "position": 2, "cost": 1.5}   // one placement
//     ],
//     "grammar": {"kind": "cnf" | "interaction", ...}
//   }
//
// CNF grammars:
//   {"kind": "cnf", "nonterminals": ["S", ...], "start": "S",
//    "rules": [{"head": "S", "body": ["A", "B"], "weight": W},
//              {"head": "A", "word": "ab", "weight": W},
//              {"head": "S", "epsilon": true, "weight": <scalar W>}]}
//
// Interaction grammars:
//   {"kind": "interaction", "depth": d,
//    "pairs": [{"left": "u", "right": "v", "weights": [W_1, ..., W_d]}]}
//
// Weight values W take one uniform union everywhere a rule weight appears:
//   3.25                                    scalar
//   "inf" or "+inf"                         unusable rule (scalar +infinity)
//   {"start": [s_1..s_n], "end": [e_1..e_n]}  separable: s_i + e_j on span [i,j]
//   [[r_11..r_1n], [r_22..r_2n], ..., [r_nn]] dense table, staircase rows
// Positional forms must cover exactly n positions.  Individual separable or
// table entries may also be "inf"; -inf and NaN are rejected everywhere.
// Pattern placement costs are plain finite numbers: hard constraints belong
// to grammar weights, where least-cost semantics absorbs infinities.
//
// Duplicate (word, position) cost entries are rejected rather than summed.
// The same word may appear once bare and once with costs only if the
// placements never collide.

#pragma once

#include <string>

#include "pgi/oracle.hpp"

namespace pgi {

// Parses instance text.  Throws InputError on malformed JSON (with line and
// column), unknown or missing fields, type mismatches, or any schema
// violation; the message names the offending field path.
Instance parse_instance_text(const std::string& text);

// Reads and parses a file; throws InputError when it cannot be opened.
Instance load_instance(const std::string& path);

// Canonical text form: sorted keys, two-space indent, "inf" strings for
// infinite weights, trailing newline.  parse_instance_text(serialize_instance(i)) == i,
// and serialization is a fixed point of parse -> serialize.
std::string serialize_instance(const Instance& inst);

// Writes serialize_instance(inst); throws std::runtime_error on I/O failure.
void save_instance(const Instance& inst, const std::string& path);

}  // namespace pgi
