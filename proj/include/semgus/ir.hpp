#pragma once

#include <json.hpp>

#include "semgus/problem.hpp"

namespace semgus {

/// S-expression <-> JSON. Symbols are strings, Int literals numbers (or
/// {"$int": "..."} beyond 2^53), strings {"$string": ...}, bitvectors
/// {"$bv": "#x.."}, keywords {"$keyword": ...}, lists arrays.
nlohmann::json sexpr_to_json(const SExpr & e);
SExpr sexpr_from_json(const nlohmann::json & j);

/// Event-tagged JSON document for an analyzed problem; `[]` when empty.
nlohmann::json to_json(const SynthesisProblem & problem);

}  // namespace semgus
