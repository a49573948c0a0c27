#include <algorithm>
#include <set>

#include "semgus/problem.hpp"

namespace semgus {

// ---------------------------------------------------------------------------
// Lookups

std::vector<TypedVar> SemanticRelation::value_params() const
{
  std::vector<TypedVar> out;
  for (size_t i = 0; i < params.size(); ++i)
    if (i != term_param) out.push_back(params[i]);
  return out;
}

std::vector<Sort> SemanticRelation::value_sorts() const
{
  std::vector<Sort> out;
  for (size_t i = 0; i < params.size(); ++i)
    if (i != term_param) out.push_back(params[i].sort);
  return out;
}

size_t SemanticRelation::value_index(size_t param_index) const
{
  return param_index > term_param ? param_index - 1 : param_index;
}

bool SemanticRelation::is_input(size_t i) const
{
  return std::find(inputs.begin(), inputs.end(), i) != inputs.end();
}

bool SemanticRelation::is_output(size_t i) const
{
  return std::find(outputs.begin(), outputs.end(), i) != outputs.end();
}

int Grammar::find(const std::string & name) const
{
  for (size_t i = 0; i < nonterminals.size(); ++i)
    if (nonterminals[i].name == name) return static_cast<int>(i);
  return -1;
}

int Chc::term_index(const std::string & name) const
{
  if (name == self_term) return -1;
  for (size_t i = 0; i < child_terms.size(); ++i)
    if (child_terms[i] == name) return static_cast<int>(i);
  return -2;
}

int SynthesisProblem::find_term_type(const std::string & name) const
{
  for (size_t i = 0; i < term_types.size(); ++i)
    if (term_types[i].name == name) return static_cast<int>(i);
  return -1;
}

int SynthesisProblem::find_constructor(const std::string & name) const
{
  for (size_t i = 0; i < constructors.size(); ++i)
    if (constructors[i].name == name) return static_cast<int>(i);
  return -1;
}

int SynthesisProblem::find_relation(const std::string & name) const
{
  for (size_t i = 0; i < relations.size(); ++i)
    if (relations[i].name == name) return static_cast<int>(i);
  return -1;
}

std::vector<int> SynthesisProblem::chcs_for(const std::string & relation,
                                            int constructor) const
{
  std::vector<int> out;
  for (size_t i = 0; i < chcs.size(); ++i)
    if (chcs[i].relation == relation && chcs[i].constructor == constructor)
      out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> SynthesisProblem::relations_for(const std::string & tt) const
{
  std::vector<int> out;
  for (size_t i = 0; i < relations.size(); ++i)
    if (relations[i].term_type() == tt) out.push_back(static_cast<int>(i));
  return out;
}

Grammar SynthesisProblem::universe_grammar(const std::string & tt) const
{
  Grammar g;
  for (const auto & t : term_types) {
    Nonterminal nt{t.name, t.name, {}};
    for (int c : t.constructors) {
      Production p{c, {}};
      for (const auto & child : constructors[c].children)
        p.children.push_back(find_term_type(child));
      nt.productions.push_back(std::move(p));
    }
    g.nonterminals.push_back(std::move(nt));
  }
  g.start = find_term_type(tt);
  return g;
}

Grammar SynthesisProblem::search_grammar() const
{
  if (!target) return {};
  if (target->grammar) return *target->grammar;
  return universe_grammar(target->term_type);
}

// ---------------------------------------------------------------------------
// Analysis

namespace {

[[noreturn]] void fail(ErrorKind k, const std::string & msg, const SExpr & at)
{
  throw Error(k, msg, at.loc());
}

const std::string & expect_symbol(const SExpr & e, const std::string & what)
{
  if (!e.is_symbol()) fail(ErrorKind::SortMismatch, "expected " + what, e);
  return e.name();
}

const std::vector<SExpr> & expect_list(const SExpr & e, const std::string & what)
{
  if (!e.is_list()) fail(ErrorKind::SortMismatch, "expected " + what, e);
  return e.items();
}

class Analyzer
{
 public:
  SynthesisProblem run(const std::vector<SExpr> & commands)
  {
    SourceLoc last;
    for (const auto & cmd : commands) {
      last = cmd.loc();
      command(cmd);
    }
    if (!p_.target)
      throw Error(ErrorKind::AbsentSynthTarget,
                  "no synth-fun command declares a synthesis target", last);
    if (!p_.check_synth)
      throw Error(ErrorKind::MissingCheckSynth, "missing (check-synth)", last);
    for (const auto & t : p_.term_types) {
      if (t.constructors.empty())
        throw Error(ErrorKind::EmptySemantics,
                    "term type '" + t.name + "' has no constructors", t.loc);
      if (p_.relations_for(t.name).empty())
        throw Error(ErrorKind::EmptySemantics,
                    "term type '" + t.name + "' has no semantic relation", t.loc);
    }
    for (const auto & r : p_.relations)
      if (!defined_.count(r.name))
        throw Error(ErrorKind::EmptySemantics,
                    "relation '" + r.name + "' has no definition", r.loc);
    for (const auto * c : pending_constraints_) constraint(*c);
    return std::move(p_);
  }

 private:
  SynthesisProblem p_;
  std::set<std::string> defined_;
  std::vector<const SExpr *> pending_constraints_;

  void command(const SExpr & cmd)
  {
    if (!cmd.is_list() || cmd.size() == 0 || !cmd[0].is_symbol())
      fail(ErrorKind::UnknownCommand, "expected a command", cmd);
    const std::string & h = cmd[0].name();
    if (h == "declare-term-types") return declare_term_types(cmd);
    if (h == "define-funs-rec") return define_funs_rec(cmd);
    if (h == "define-fun-rec") {
      // single-relation shorthand: (define-fun-rec R params Bool body)
      if (cmd.size() != 5) fail(ErrorKind::ArityMismatch, "malformed define-fun-rec", cmd);
      SExpr decl = SExpr::list({cmd[1], cmd[2], cmd[3]}, cmd[1].loc());
      return define_relations({decl}, {cmd[4]}, cmd);
    }
    if (h == "synth-fun") return synth_fun(cmd);
    if (h == "declare-var") return declare_var(cmd);
    if (h == "constraint") {
      if (cmd.size() != 2) fail(ErrorKind::ArityMismatch, "constraint takes one formula", cmd);
      pending_constraints_.push_back(&cmd);
      return;
    }
    if (h == "check-synth") {
      p_.check_synth = true;
      return;
    }
    if (h.rfind("set-", 0) == 0) {
      p_.metadata.push_back(cmd);
      return;
    }
    fail(ErrorKind::UnknownCommand, "unknown command '" + h + "'", cmd[0]);
  }

  void declare_term_types(const SExpr & cmd)
  {
    if (cmd.size() != 3)
      fail(ErrorKind::ArityMismatch, "declare-term-types expects two lists", cmd);
    const auto & decls = expect_list(cmd[1], "term type declarations");
    const auto & bodies = expect_list(cmd[2], "constructor lists");
    if (decls.size() != bodies.size())
      fail(ErrorKind::ArityMismatch,
           std::to_string(decls.size()) + " term types but " +
               std::to_string(bodies.size()) + " constructor lists",
           cmd);
    size_t first = p_.term_types.size();
    for (const auto & d : decls) {
      if (!d.is_list() || d.size() != 2 || !d[0].is_symbol() ||
          d[1].kind() != SExpr::Kind::Numeral)
        fail(ErrorKind::SortMismatch, "expected (Name arity)", d);
      if (d[1].numeral() != 0)
        fail(ErrorKind::UnsupportedArity,
             "term type '" + d[0].name() + "' has nonzero arity", d[1]);
      if (p_.find_term_type(d[0].name()) >= 0)
        fail(ErrorKind::DuplicateDeclaration,
             "term type '" + d[0].name() + "' declared twice", d[0]);
      p_.term_types.push_back({d[0].name(), 0, {}, d.loc()});
    }
    for (size_t i = 0; i < bodies.size(); ++i) {
      auto & tt = p_.term_types[first + i];
      for (const auto & c : expect_list(bodies[i], "constructor list")) {
        Constructor ctor;
        ctor.term_type = tt.name;
        ctor.loc = c.loc();
        if (c.is_symbol()) {
          ctor.name = c.name();
        } else {
          if (!c.is_list() || c.size() == 0 || !c[0].is_symbol())
            fail(ErrorKind::SortMismatch, "expected ($ctor Child...)", c);
          ctor.name = c[0].name();
          for (size_t k = 1; k < c.size(); ++k) {
            const auto & child = expect_symbol(c[k], "child term type");
            if (p_.find_term_type(child) < 0)
              fail(ErrorKind::UnresolvedName,
                   "unknown term type '" + child + "'", c[k]);
            ctor.children.push_back(child);
          }
        }
        if (p_.find_constructor(ctor.name) >= 0)
          fail(ErrorKind::DuplicateDeclaration,
               "constructor '" + ctor.name + "' declared twice", c);
        tt.constructors.push_back(static_cast<int>(p_.constructors.size()));
        p_.constructors.push_back(std::move(ctor));
      }
    }
  }

  void define_funs_rec(const SExpr & cmd)
  {
    if (cmd.size() != 3)
      fail(ErrorKind::ArityMismatch, "define-funs-rec expects two lists", cmd);
    const auto & decls = expect_list(cmd[1], "relation declarations");
    const auto & bodies = expect_list(cmd[2], "relation bodies");
    if (decls.size() != bodies.size())
      fail(ErrorKind::ArityMismatch,
           std::to_string(decls.size()) + " relations but " +
               std::to_string(bodies.size()) + " bodies",
           cmd);
    define_relations(decls, bodies, cmd);
  }

  struct Annotations
  {
    std::optional<std::vector<std::string>> in, out;
    SourceLoc loc;
  };

  // Peel (! e :input (..) :output (..)) into e plus annotations.
  static const SExpr & peel(const SExpr & e, Annotations & ann)
  {
    if (!e.has_head("!")) return e;
    if (e.size() < 2) fail(ErrorKind::BadAnnotation, "empty annotation", e);
    ann.loc = e.loc();
    for (size_t i = 2; i < e.size(); ++i) {
      if (!e[i].is_keyword())
        fail(ErrorKind::BadAnnotation, "expected an attribute keyword", e[i]);
      const std::string & k = e[i].name();
      if (k != "input" && k != "output") {
        // unknown attributes are tolerated (with or without a value)
        if (i + 1 < e.size() && !e[i + 1].is_keyword()) ++i;
        continue;
      }
      if (i + 1 >= e.size() || !e[i + 1].is_list())
        fail(ErrorKind::BadAnnotation, ":" + k + " expects a variable list", e[i]);
      std::vector<std::string> names;
      for (const auto & n : e[i + 1].items()) {
        if (!n.is_symbol())
          fail(ErrorKind::BadAnnotation, "annotation entries must be names", n);
        names.push_back(n.name());
      }
      auto & slot = k == "input" ? ann.in : ann.out;
      if (slot) fail(ErrorKind::BadAnnotation, "duplicate :" + k, e[i]);
      slot = std::move(names);
      ++i;
    }
    return peel(e[1], ann);
  }

  void apply_annotations(SemanticRelation & r, const Annotations & ann)
  {
    if (!ann.in && !ann.out) return;
    if (r.annotated())
      throw Error(ErrorKind::BadAnnotation,
                  "relation '" + r.name + "' annotated twice", ann.loc);
    auto resolve = [&](const std::vector<std::string> & names) {
      std::vector<size_t> idx;
      for (const auto & n : names) {
        size_t i = 0;
        while (i < r.params.size() && r.params[i].name != n) ++i;
        if (i == r.params.size())
          throw Error(ErrorKind::BadAnnotation,
                      "'" + n + "' is not a parameter of " + r.name, ann.loc);
        if (i == r.term_param)
          throw Error(ErrorKind::BadAnnotation,
                      "the term parameter cannot be annotated", ann.loc);
        if (std::find(idx.begin(), idx.end(), i) != idx.end())
          throw Error(ErrorKind::BadAnnotation, "'" + n + "' listed twice",
                      ann.loc);
        idx.push_back(i);
      }
      return idx;
    };
    auto complement = [&](const std::vector<size_t> & taken) {
      std::vector<size_t> rest;
      for (size_t i = 0; i < r.params.size(); ++i)
        if (i != r.term_param &&
            std::find(taken.begin(), taken.end(), i) == taken.end())
          rest.push_back(i);
      return rest;
    };
    if (ann.in) r.inputs = resolve(*ann.in);
    if (ann.out) r.outputs = resolve(*ann.out);
    if (!ann.in) r.inputs = complement(r.outputs);
    if (!ann.out) r.outputs = complement(r.inputs);
    for (size_t i : r.inputs)
      if (r.is_output(i))
        throw Error(ErrorKind::BadAnnotation,
                    "'" + r.params[i].name + "' is both input and output",
                    ann.loc);
    if (r.inputs.size() + r.outputs.size() + 1 != r.params.size())
      throw Error(ErrorKind::BadAnnotation,
                  "annotations of " + r.name + " do not cover every parameter",
                  ann.loc);
  }

  void define_relations(const std::vector<SExpr> & decls,
                        const std::vector<SExpr> & bodies, const SExpr & cmd)
  {
    (void)cmd;
    std::vector<int> ids;
    for (const auto & raw : decls) {
      Annotations ann;
      const SExpr & d = peel(raw, ann);
      if (!d.is_list() || d.size() != 3 || !d[0].is_symbol() || !d[1].is_list())
        fail(ErrorKind::SortMismatch, "expected (Name ((param Sort)...) Bool)", d);
      SemanticRelation r;
      r.name = d[0].name();
      r.loc = d.loc();
      if (p_.find_relation(r.name) >= 0)
        fail(ErrorKind::DuplicateDeclaration,
             "relation '" + r.name + "' declared twice", d[0]);
      int term_params = 0;
      std::set<std::string> seen;
      for (const auto & prm : d[1].items()) {
        if (!prm.is_list() || prm.size() != 2 || !prm[0].is_symbol())
          fail(ErrorKind::SortMismatch, "expected (name Sort)", prm);
        if (!seen.insert(prm[0].name()).second)
          fail(ErrorKind::DuplicateDeclaration,
               "parameter '" + prm[0].name() + "' repeated", prm[0]);
        Sort s;
        if (!parse_value_sort(prm[1], s)) {
          if (!prm[1].is_symbol())
            fail(ErrorKind::SortMismatch, "unsupported sort", prm[1]);
          if (p_.find_term_type(prm[1].name()) < 0)
            fail(ErrorKind::UnresolvedName,
                 "unknown sort '" + prm[1].name() + "'", prm[1]);
          s = Sort::term(prm[1].name());
          r.term_param = r.params.size();
          ++term_params;
        }
        r.params.push_back({prm[0].name(), s});
      }
      if (term_params != 1)
        fail(ErrorKind::SortMismatch,
             "relation '" + r.name + "' needs exactly one term parameter", d[1]);
      if (!d[2].is_symbol("Bool"))
        fail(ErrorKind::SortMismatch, "semantic relations must return Bool", d[2]);
      apply_annotations(r, ann);
      ids.push_back(static_cast<int>(p_.relations.size()));
      p_.relations.push_back(std::move(r));
    }
    for (size_t i = 0; i < bodies.size(); ++i) {
      Annotations ann;
      const SExpr & m = peel(bodies[i], ann);
      apply_annotations(p_.relations[ids[i]], ann);
      desugar_semantics(p_, ids[i], m);
      defined_.insert(p_.relations[ids[i]].name);
    }
  }

  void synth_fun(const SExpr & cmd)
  {
    if (cmd.size() < 4 || cmd.size() > 6)
      fail(ErrorKind::ArityMismatch, "malformed synth-fun", cmd);
    const auto & name = expect_symbol(cmd[1], "a function name");
    if (!cmd[2].is_list() || cmd[2].size() != 0)
      fail(ErrorKind::ArityMismatch,
           "synth-fun targets take no arguments in this format", cmd[2]);
    const auto & tt = expect_symbol(cmd[3], "a term type");
    if (p_.find_term_type(tt) < 0)
      fail(ErrorKind::UnresolvedName, "unknown term type '" + tt + "'", cmd[3]);
    if (p_.target)
      fail(ErrorKind::DuplicateDeclaration, "second synth-fun '" + name + "'", cmd);
    SynthTarget t{name, tt, std::nullopt};
    if (cmd.size() > 4) {
      // SyGuS v2: predeclaration list + rule groups; v1: rule groups only
      const SExpr & rules = cmd.size() == 6 ? cmd[5] : cmd[4];
      t.grammar = grammar(rules, tt);
      if (cmd.size() == 6) check_predeclared(cmd[4], *t.grammar);
    }
    p_.target = std::move(t);
  }

  Grammar grammar(const SExpr & rules, const std::string & tt)
  {
    Grammar g;
    const auto & groups = expect_list(rules, "grammar rules");
    if (groups.empty()) fail(ErrorKind::ArityMismatch, "empty grammar", rules);
    for (const auto & grp : groups) {
      if (!grp.is_list() || grp.size() != 3 || !grp[0].is_symbol() ||
          !grp[1].is_symbol() || !grp[2].is_list())
        fail(ErrorKind::SortMismatch, "expected (N TermType (productions))", grp);
      if (g.find(grp[0].name()) >= 0)
        fail(ErrorKind::DuplicateDeclaration,
             "nonterminal '" + grp[0].name() + "' declared twice", grp[0]);
      if (p_.find_term_type(grp[1].name()) < 0)
        fail(ErrorKind::UnresolvedName,
             "unknown term type '" + grp[1].name() + "'", grp[1]);
      g.nonterminals.push_back({grp[0].name(), grp[1].name(), {}});
    }
    if (g.nonterminals[0].term_type != tt)
      fail(ErrorKind::SortMismatch, "start nonterminal must have term type " + tt,
           groups[0]);
    for (size_t i = 0; i < groups.size(); ++i) {
      auto & nt = g.nonterminals[i];
      for (const auto & prod : groups[i][2].items()) {
        const SExpr & head = prod.is_list() && prod.size() > 0 ? prod[0] : prod;
        const auto & cname = expect_symbol(head, "a constructor");
        int c = p_.find_constructor(cname);
        if (c < 0) {
          if (g.find(cname) >= 0)
            fail(ErrorKind::UnsupportedConstruct,
                 "chain productions are not supported", prod);
          fail(ErrorKind::UnresolvedName, "unknown constructor '" + cname + "'",
               head);
        }
        const auto & ctor = p_.constructors[c];
        if (ctor.term_type != nt.term_type)
          fail(ErrorKind::SortMismatch,
               cname + " does not build terms of type " + nt.term_type, head);
        size_t nargs = prod.is_list() ? prod.size() - 1 : 0;
        if (nargs != ctor.arity())
          fail(ErrorKind::ArityMismatch,
               cname + " expects " + std::to_string(ctor.arity()) + " children",
               prod);
        Production p{c, {}};
        for (size_t k = 0; k < nargs; ++k) {
          const auto & child = expect_symbol(prod[k + 1], "a nonterminal");
          int n = g.find(child);
          if (n < 0)
            fail(ErrorKind::UnresolvedName, "unknown nonterminal '" + child + "'",
                 prod[k + 1]);
          if (g.nonterminals[n].term_type != ctor.children[k])
            fail(ErrorKind::SortMismatch,
                 "nonterminal " + child + " has the wrong term type for " + cname,
                 prod[k + 1]);
          p.children.push_back(n);
        }
        nt.productions.push_back(std::move(p));
      }
    }
    return g;
  }

  void check_predeclared(const SExpr & decls, const Grammar & g)
  {
    const auto & items = expect_list(decls, "nonterminal declarations");
    if (items.size() != g.nonterminals.size())
      fail(ErrorKind::ArityMismatch, "predeclared nonterminals do not match rules",
           decls);
    for (size_t i = 0; i < items.size(); ++i) {
      const auto & d = items[i];
      if (!d.is_list() || d.size() != 2 || !d[0].is_symbol() ||
          !d[1].is_symbol())
        fail(ErrorKind::SortMismatch, "expected (N TermType)", d);
      if (d[0].name() != g.nonterminals[i].name ||
          d[1].name() != g.nonterminals[i].term_type)
        fail(ErrorKind::SortMismatch, "nonterminal declaration mismatch", d);
    }
  }

  void declare_var(const SExpr & cmd)
  {
    if (cmd.size() != 3)
      fail(ErrorKind::ArityMismatch, "declare-var expects a name and a sort", cmd);
    const auto & name = expect_symbol(cmd[1], "a variable name");
    Sort s;
    if (!parse_value_sort(cmd[2], s))
      fail(ErrorKind::SortMismatch, "declare-var needs a value sort", cmd[2]);
    for (const auto & v : p_.variables)
      if (v.name == name)
        fail(ErrorKind::DuplicateDeclaration, "variable '" + name + "' declared twice",
             cmd[1]);
    p_.variables.push_back({name, s});
  }

  void constraint(const SExpr & cmd)
  {
    const std::string & target = p_.target->name;
    FormulaScope scope;
    scope.is_variable = [&](const std::string & n) {
      for (const auto & v : p_.variables)
        if (v.name == n) return true;
      return false;
    };
    scope.is_relation = [&](const std::string & n) { return p_.find_relation(n) >= 0; };
    scope.is_term = [&](const std::string & n) { return n == target; };
    Formula f = parse_formula(cmd[1], scope);

    SortEnv env;
    for (const auto & v : p_.variables) env.vars[v.name] = v.sort;
    env.relation_params = [&](const std::string & n) -> std::optional<std::vector<Sort>> {
      int r = p_.find_relation(n);
      if (r < 0) return std::nullopt;
      return p_.relations[r].value_sorts();
    };
    if (formula_sort(f, env) != Sort::bool_sort())
      fail(ErrorKind::SortMismatch, "constraints must be Bool", cmd[1]);
    check_rel_terms(f);
    p_.constraints.push_back({f, cmd.loc()});
  }

  void check_rel_terms(const Formula & f)
  {
    if (f.kind() == Formula::Kind::RelApp) {
      const auto & r = p_.relations[p_.find_relation(f.name())];
      if (r.term_type() != p_.target->term_type)
        throw Error(ErrorKind::SortMismatch,
                    f.name() + " interprets " + r.term_type() + " terms, but " +
                        p_.target->name + " has type " + p_.target->term_type,
                    f.loc());
    }
    for (const auto & a : f.args()) check_rel_terms(a);
  }
};

}  // namespace

SynthesisProblem analyze(const std::vector<SExpr> & commands)
{
  return Analyzer().run(commands);
}

SynthesisProblem parse_problem(std::string_view text)
{
  return analyze(read_sexprs(text));
}

}  // namespace semgus
