#pragma once

#include <string>
#include <vector>

#include "semgus/problem.hpp"

namespace semgus {

struct SygusNonterminal
{
  std::string name;
  Sort sort;
  std::vector<SExpr> productions;  // SMT term schemas over nonterminals and parameters

  bool operator==(const SygusNonterminal &) const = default;
};

/// The supported SyGuS v2 subset: one synth-fun with a grammar, declare-var,
/// constraint, check-synth.
struct SygusProblem
{
  std::string logic = "ALL";
  std::string name;
  std::vector<TypedVar> params;
  Sort ret;
  std::vector<SygusNonterminal> grammar;  // grammar[0] is the start symbol
  std::vector<TypedVar> variables;
  std::vector<SExpr> constraints;

  bool operator==(const SygusProblem &) const = default;
};

SygusProblem parse_sygus(std::string_view text);
std::string print_sygus(const SygusProblem & p);

/// SemGuS source text equivalent to `p`: one term type per nonterminal, one
/// constructor and one functional CHC per production.
std::string sygus_to_semgus_text(const SygusProblem & p);
SynthesisProblem sygus_to_semgus(const SygusProblem & p);

/// Inverse translation for the functional, single-output fragment. Throws
/// NotInFragment naming the first violation.
SygusProblem semgus_to_sygus(const SynthesisProblem & p);

}  // namespace semgus
