#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "semgus/sexpr.hpp"
#include "semgus/sort.hpp"
#include "semgus/value.hpp"

namespace semgus {

/// Built-in theory operators.
enum class Op
{
  // core
  Not, And, Or, Implies, Xor, Ite, Eq, Distinct,
  // integers
  Add, Sub, Mul, Div, Mod, Abs, Lt, Le, Gt, Ge,
  // bitvectors
  BvAdd, BvSub, BvMul, BvUdiv, BvUrem, BvAnd, BvOr, BvXor, BvNot, BvNeg,
  BvShl, BvLshr, BvAshr, BvUlt, BvUle, BvUgt, BvUge, BvSlt, BvSle, BvSgt,
  BvSge,
  // strings
  StrConcat, StrLen, StrAt, StrContains,
};

std::optional<Op> op_from_name(std::string_view name);
std::string_view op_name(Op op);

/// Apply a built-in operator to concrete arguments under SMT-LIB semantics.
/// Int div/mod are Euclidean; a zero divisor throws DivByZero.
Value apply_op(Op op, std::span<const Value> args);

/// Immutable, structurally shared formula tree. Equality is structural and
/// ignores source locations.
class Formula
{
 public:
  enum class Kind
  {
    Var,
    Literal,
    App,
    RelApp,  // relation application R(term, args...)
    Quant
  };

  struct Node
  {
    Kind kind = Kind::Literal;
    Op op = Op::And;
    std::string name;  // variable name, or relation name for RelApp
    std::string term;  // RelApp: the term-position symbol
    Value literal;
    std::vector<Formula> args;
    std::vector<TypedVar> binders;
    bool forall = false;
    SourceLoc loc;
  };

  Formula();  // the literal `true`

  static Formula var(std::string name, SourceLoc loc = {});
  static Formula literal(Value v, SourceLoc loc = {});
  static Formula app(Op op, std::vector<Formula> args, SourceLoc loc = {});
  static Formula rel_app(std::string relation, std::string term,
                         std::vector<Formula> args, SourceLoc loc = {});
  static Formula quant(bool forall, std::vector<TypedVar> binders,
                       Formula body, SourceLoc loc = {});
  /// Conjunction, collapsing the 0- and 1-element cases.
  static Formula conjunction(std::vector<Formula> parts);

  Kind kind() const { return n_->kind; }
  Op op() const { return n_->op; }
  const std::string & name() const { return n_->name; }
  const std::string & term() const { return n_->term; }
  const Value & literal_value() const { return n_->literal; }
  const std::vector<Formula> & args() const { return n_->args; }
  const std::vector<TypedVar> & binders() const { return n_->binders; }
  bool is_forall() const { return n_->forall; }
  const Formula & body() const { return n_->args.front(); }
  const SourceLoc & loc() const { return n_->loc; }

  bool is_var() const { return kind() == Kind::Var; }
  bool is_true() const;

  bool operator==(const Formula & other) const;

  /// Free value variables (bound quantifier variables excluded).
  std::set<std::string> free_vars() const;
  /// True if any relation application occurs.
  bool has_rel_app() const;
  /// True if any quantifier occurs.
  bool has_quantifier() const;

  Formula substitute(const std::map<std::string, Formula> & sub) const;

  SExpr to_sexpr() const;
  std::string str() const { return print_sexpr(to_sexpr()); }

 private:
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

/// Name resolution context for parsing formulas from s-expressions.
struct FormulaScope
{
  std::function<bool(const std::string &)> is_variable;
  std::function<bool(const std::string &)> is_relation;
  /// Names allowed in the term position of a relation application.
  std::function<bool(const std::string &)> is_term;
  bool allow_quantifiers = true;
};

Formula parse_formula(const SExpr & e, const FormulaScope & scope);

/// Sorting context: variable sorts plus the value-parameter sorts of relations.
struct SortEnv
{
  std::map<std::string, Sort> vars;
  std::function<std::optional<std::vector<Sort>>(const std::string &)>
      relation_params;
};

/// Infer the sort of `f`; throws IllSorted on ill-sorted applications.
Sort formula_sort(const Formula & f, const SortEnv & env);

/// Evaluate a formula against a binding. Relation applications are delegated
/// to `rel` (if absent, they raise UnsupportedConstruct); quantifiers are not
/// evaluable and raise UnsupportedConstruct.
using RelationOracle =
    std::function<bool(const Formula & rel_app, const Binding & env)>;
Value eval_formula(const Formula & f, const Binding & env,
                   const RelationOracle & rel = nullptr);

}  // namespace semgus
