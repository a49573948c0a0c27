#include <set>

#include "semgus/problem.hpp"

namespace semgus {

namespace {

[[noreturn]] void fail(ErrorKind k, const std::string & msg, const SExpr & at)
{
  throw Error(k, msg, at.loc());
}

// A pattern is ($c v...) with |v...| = arity of $c, or a bare nullary $c.
bool looks_like_pattern(const SynthesisProblem & p, const SExpr & e)
{
  if (e.is_symbol()) {
    int c = p.find_constructor(e.name());
    return c >= 0 && p.constructors[c].arity() == 0;
  }
  if (!e.is_list() || e.size() == 0 || !e[0].is_symbol()) return false;
  int c = p.find_constructor(e[0].name());
  if (c < 0 || p.constructors[c].arity() + 1 != e.size()) return false;
  for (const auto & x : e.items())
    if (!x.is_symbol()) return false;
  return true;
}

class Desugarer
{
 public:
  Desugarer(SynthesisProblem & p, int rel) : p_(p), rel_(p.relations[rel]) {}

  void run(const SExpr & m)
  {
    if (!m.has_head("match"))
      fail(ErrorKind::UnsupportedConstruct,
           "semantics of " + rel_.name + " must be a match on its term", m);
    if (m.size() < 3)
      fail(ErrorKind::ArityMismatch, "match needs a scrutinee and arms", m);
    const std::string & self = rel_.params[rel_.term_param].name;
    if (!m[1].is_symbol(self))
      fail(ErrorKind::UnresolvedName,
           "match must scrutinize the term parameter '" + self + "'", m[1]);

    std::vector<SExpr> arms;
    if (m.size() == 3 && m[2].is_list() && m[2].size() > 0 &&
        !looks_like_pattern(p_, m[2][0]))
      arms = m[2].items();  // SMT-LIB style (match t (arm...))
    else
      arms.assign(m.items().begin() + 2, m.items().end());

    std::set<int> covered;
    for (const auto & arm : arms) desugar_arm(arm, covered);

    std::string missing;
    int tt = p_.find_term_type(rel_.term_type());
    for (int c : p_.term_types[tt].constructors)
      if (!covered.count(c)) missing += " " + p_.constructors[c].name;
    if (!missing.empty())
      fail(ErrorKind::NonExhaustiveMatch,
           "match in " + rel_.name + " does not cover:" + missing, m);
  }

 private:
  SynthesisProblem & p_;
  const SemanticRelation & rel_;

  void desugar_arm(const SExpr & arm, std::set<int> & covered)
  {
    if (!arm.is_list() || arm.size() < 2)
      fail(ErrorKind::UnsupportedConstruct,
           "match arm needs a pattern and at least one body", arm);
    const SExpr & pat = arm[0];
    const SExpr & head = pat.is_list() && pat.size() > 0 ? pat[0] : pat;
    if (!head.is_symbol())
      fail(ErrorKind::UnsupportedConstruct, "malformed pattern", pat);
    int c = p_.find_constructor(head.name());
    if (c < 0)
      fail(ErrorKind::UnresolvedName, "unknown constructor '" + head.name() + "'",
           head);
    const Constructor & ctor = p_.constructors[c];
    if (ctor.term_type != rel_.term_type())
      fail(ErrorKind::UnknownConstructor,
           head.name() + " is not a constructor of " + rel_.term_type(), head);
    size_t nvars = pat.is_list() ? pat.size() - 1 : 0;
    if (nvars != ctor.arity())
      fail(ErrorKind::ArityMismatch,
           head.name() + " binds " + std::to_string(ctor.arity()) + " children",
           pat);
    if (!covered.insert(c).second)
      fail(ErrorKind::DuplicateArm, "second arm for " + head.name(), arm);

    std::vector<std::string> children;
    std::set<std::string> names;
    for (const auto & prm : rel_.params) names.insert(prm.name);
    for (size_t k = 0; k < nvars; ++k) {
      const SExpr & v = pat[k + 1];
      if (!v.is_symbol())
        fail(ErrorKind::UnsupportedConstruct, "pattern variables must be names", v);
      if (!names.insert(v.name()).second)
        fail(ErrorKind::DuplicateDeclaration,
             "pattern variable '" + v.name() + "' shadows another name", v);
      children.push_back(v.name());
    }
    for (size_t alt = 1; alt < arm.size(); ++alt)
      p_.chcs.push_back(
          alternative(arm[alt], c, static_cast<int>(alt - 1), children, names));
  }

  Chc alternative(const SExpr & e, int ctor, int index,
                  const std::vector<std::string> & children,
                  std::set<std::string> names)
  {
    Chc chc;
    chc.relation = rel_.name;
    chc.constructor = ctor;
    chc.alternative = index;
    chc.self_term = rel_.params[rel_.term_param].name;
    chc.child_terms = children;
    for (const auto & v : rel_.value_params()) chc.head_args.push_back(v.name);
    chc.loc = e.loc();

    const SExpr * body = &e;
    if (e.has_head("forall"))
      fail(ErrorKind::UnsupportedConstruct, "CHC bodies cannot be universally quantified", e);
    if (e.has_head("exists")) {
      if (e.size() != 3 || !e[1].is_list())
        fail(ErrorKind::ArityMismatch, "malformed exists block", e);
      for (const auto & b : e[1].items()) {
        Sort s;
        if (!b.is_list() || b.size() != 2 || !b[0].is_symbol() ||
            !parse_value_sort(b[1], s))
          fail(ErrorKind::SortMismatch, "malformed auxiliary variable", b);
        if (!names.insert(b[0].name()).second)
          fail(ErrorKind::DuplicateDeclaration,
               "auxiliary '" + b[0].name() + "' shadows another name", b[0]);
        chc.aux.push_back({b[0].name(), s});
      }
      body = &e[2];
    }

    std::set<std::string> values(chc.head_args.begin(), chc.head_args.end());
    for (const auto & a : chc.aux) values.insert(a.name);
    FormulaScope scope;
    scope.is_variable = [&](const std::string & n) { return values.count(n) > 0; };
    scope.is_relation = [&](const std::string & n) { return p_.find_relation(n) >= 0; };
    scope.is_term = [&](const std::string & n) { return chc.term_index(n) != -2; };
    scope.allow_quantifiers = false;
    Formula f = parse_formula(*body, scope);

    std::vector<Formula> leaves;
    flatten(f, leaves);
    int fresh = 0;
    for (const auto & leaf : leaves) {
      SortEnv env = sort_env(chc);
      if (formula_sort(leaf, env) != Sort::bool_sort())
        throw Error(ErrorKind::IllSorted, "conjunct is not Bool: " + leaf.str(),
                    leaf.loc());
      if (leaf.kind() == Formula::Kind::RelApp) {
        chc.body.push_back(relation_app(chc, leaf, names, fresh));
      } else {
        if (leaf.has_rel_app())
          throw Error(ErrorKind::UnsupportedConstruct,
                      "relation applications must be top-level conjuncts",
                      leaf.loc());
        if (leaf.is_true()) continue;
        chc.conjuncts.push_back(leaf);
      }
    }
    return chc;
  }

  static void flatten(const Formula & f, std::vector<Formula> & out)
  {
    if (f.kind() == Formula::Kind::App && f.op() == Op::And) {
      for (const auto & a : f.args()) flatten(a, out);
      return;
    }
    out.push_back(f);
  }

  SortEnv sort_env(const Chc & chc) const
  {
    SortEnv env;
    for (const auto & v : rel_.value_params()) env.vars[v.name] = v.sort;
    for (const auto & a : chc.aux) env.vars[a.name] = a.sort;
    env.relation_params = [this](const std::string & n) -> std::optional<std::vector<Sort>> {
      int r = p_.find_relation(n);
      if (r < 0) return std::nullopt;
      return p_.relations[r].value_sorts();
    };
    return env;
  }

  RelationApp relation_app(Chc & chc, const Formula & f,
                           std::set<std::string> & names, int & fresh)
  {
    const auto & callee = p_.relations[p_.find_relation(f.name())];
    int ti = chc.term_index(f.term());
    const std::string & tt = ti == -1 ? rel_.term_type()
                                      : p_.constructors[chc.constructor].children[ti];
    if (tt != callee.term_type())
      throw Error(ErrorKind::IllSorted,
                  f.term() + " has term type " + tt + " but " + callee.name +
                      " interprets " + callee.term_type(),
                  f.loc());
    RelationApp app{callee.name, f.term(), {}, f.loc()};
    auto sorts = callee.value_sorts();
    for (size_t i = 0; i < f.args().size(); ++i) {
      const Formula & a = f.args()[i];
      if (a.is_var()) {
        app.args.push_back(a.name());
        continue;
      }
      // name the expression so the application only mentions variables
      std::string v;
      do v = "_a" + std::to_string(fresh++);
      while (names.count(v));
      names.insert(v);
      chc.aux.push_back({v, sorts[i]});
      chc.conjuncts.push_back(
          Formula::app(Op::Eq, {Formula::var(v, a.loc()), a}, a.loc()));
      app.args.push_back(v);
    }
    return app;
  }
};

}  // namespace

void desugar_semantics(SynthesisProblem & problem, int relation,
                       const SExpr & match)
{
  Desugarer(problem, relation).run(match);
}

}  // namespace semgus
