#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "semgus/chc.hpp"
#include "semgus/sexpr.hpp"

namespace semgus {

struct Constructor
{
  std::string name;                   // e.g. $while
  std::string term_type;              // owning term type
  std::vector<std::string> children;  // child term types
  SourceLoc loc;

  size_t arity() const { return children.size(); }
  bool operator==(const Constructor &) const = default;
};

struct TermTypeDecl
{
  std::string name;
  int arity = 0;
  std::vector<int> constructors;  // indices into SynthesisProblem::constructors
  SourceLoc loc;

  bool operator==(const TermTypeDecl &) const = default;
};

struct SemanticRelation
{
  std::string name;
  std::vector<TypedVar> params;  // full signature, term parameter included
  size_t term_param = 0;
  std::vector<size_t> inputs;   // indices into params
  std::vector<size_t> outputs;  // indices into params
  SourceLoc loc;

  const std::string & term_type() const { return params[term_param].sort.term_type; }
  bool annotated() const { return !inputs.empty() || !outputs.empty(); }
  /// Value parameters in signature order (what a RelApp's args line up with).
  std::vector<TypedVar> value_params() const;
  std::vector<Sort> value_sorts() const;
  /// Position of params[i] among the value parameters.
  size_t value_index(size_t param_index) const;
  bool is_input(size_t param_index) const;
  bool is_output(size_t param_index) const;

  bool operator==(const SemanticRelation &) const = default;
};

struct Production
{
  int constructor = -1;
  std::vector<int> children;  // nonterminal indices

  bool operator==(const Production &) const = default;
};

struct Nonterminal
{
  std::string name;
  std::string term_type;
  std::vector<Production> productions;

  bool operator==(const Nonterminal &) const = default;
};

struct Grammar
{
  std::vector<Nonterminal> nonterminals;
  int start = 0;

  int find(const std::string & name) const;
  bool operator==(const Grammar &) const = default;
};

struct SynthTarget
{
  std::string name;
  std::string term_type;
  std::optional<Grammar> grammar;

  bool operator==(const SynthTarget &) const = default;
};

struct Constraint
{
  Formula formula;
  SourceLoc loc;
  bool operator==(const Constraint &) const = default;
};

/// A fully resolved SemGuS problem. Immutable after analysis.
struct SynthesisProblem
{
  std::vector<TermTypeDecl> term_types;
  std::vector<Constructor> constructors;
  std::vector<SemanticRelation> relations;
  std::vector<Chc> chcs;
  std::optional<SynthTarget> target;
  std::vector<TypedVar> variables;  // declare-var: universally quantified
  std::vector<Constraint> constraints;
  std::vector<SExpr> metadata;  // set-* commands, verbatim
  bool check_synth = false;

  int find_term_type(const std::string & name) const;
  int find_constructor(const std::string & name) const;
  int find_relation(const std::string & name) const;
  /// CHC indices for (relation, constructor), in declaration order.
  std::vector<int> chcs_for(const std::string & relation, int constructor) const;
  /// Relations whose term parameter has the given term type.
  std::vector<int> relations_for(const std::string & term_type) const;

  /// The target grammar, or the whole term universe rooted at the target
  /// type (one nonterminal per term type) when none was given.
  Grammar search_grammar() const;
  /// Term universe grammar rooted at `term_type`.
  Grammar universe_grammar(const std::string & term_type) const;

  bool empty() const
  {
    return term_types.empty() && relations.empty() && !target &&
           constraints.empty() && metadata.empty() && !check_synth;
  }

  bool operator==(const SynthesisProblem &) const = default;
};

/// Interpret SemGuS commands into a validated problem.
SynthesisProblem analyze(const std::vector<SExpr> & commands);
/// Convenience: read_sexprs + analyze.
SynthesisProblem parse_problem(std::string_view text);

/// Desugar one relation's `match` body into CHCs (appended to problem.chcs).
/// `problem` must already contain term types, constructors and relations.
void desugar_semantics(SynthesisProblem & problem, int relation,
                       const SExpr & match);

/// Human readable dump of the analyzed problem as s-expressions.
std::string to_sexpr_dump(const SynthesisProblem & problem);

}  // namespace semgus
