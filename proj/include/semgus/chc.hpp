#pragma once

#include <string>
#include <vector>

#include "semgus/formula.hpp"

namespace semgus {

/// A body atom R(term, args...). `term` is the matched term variable itself
/// (recursion on the same node) or one of the constructor's child variables.
struct RelationApp
{
  std::string relation;
  std::string term;
  std::vector<std::string> args;  // value arguments, term position excluded
  SourceLoc loc;

  bool operator==(const RelationApp &) const = default;
};

/// One Horn clause: conjuncts /\ body apps => head(term, head_args).
struct Chc
{
  std::string relation;
  int constructor = -1;  // index into SynthesisProblem::constructors
  int alternative = 0;   // ordinal among this constructor's CHCs
  std::string self_term;                 // the matched variable (e.g. t)
  std::vector<std::string> child_terms;  // pattern-bound child variables
  std::vector<std::string> head_args;    // relation's value parameter names
  std::vector<TypedVar> aux;             // exists-bound plus generated
  std::vector<RelationApp> body;
  std::vector<Formula> conjuncts;  // top-level conjuncts of the constraint
  SourceLoc loc;

  Formula constraint() const { return Formula::conjunction(conjuncts); }
  /// Index of `name` among child_terms, -1 for self_term, -2 otherwise.
  int term_index(const std::string & name) const;

  bool operator==(const Chc &) const = default;
};

}  // namespace semgus
