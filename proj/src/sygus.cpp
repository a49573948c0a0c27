#include "semgus/sygus.hpp"

#include <map>
#include <set>
#include <sstream>

#include "semgus/operationalizer.hpp"

namespace semgus {

namespace {

Sort read_sort(const SExpr & e)
{
  Sort s;
  if (!parse_value_sort(e, s))
    throw Error(ErrorKind::UnsupportedTheory, "unsupported sort " + print_sexpr(e), e.loc());
  return s;
}

std::vector<TypedVar> read_params(const SExpr & e)
{
  if (!e.is_list()) throw Error(ErrorKind::BadToken, "expected a parameter list", e.loc());
  std::vector<TypedVar> out;
  for (const auto & b : e.items()) {
    if (!b.is_list() || b.size() != 2 || !b[0].is_symbol())
      throw Error(ErrorKind::BadToken, "expected (name Sort)", b.loc());
    out.push_back({b[0].name(), read_sort(b[1])});
  }
  return out;
}

bool is_grammar_block(const SExpr & e, size_t width)
{
  if (!e.is_list() || e.size() == 0) return false;
  for (const auto & x : e.items())
    if (!x.is_list() || x.size() != width || !x[0].is_symbol()) return false;
  return true;
}

std::vector<SygusNonterminal> read_grammar(const SExpr & rules, const SExpr & fn)
{
  std::vector<SygusNonterminal> g;
  for (const auto & r : rules.items()) {
    SygusNonterminal nt{r[0].name(), read_sort(r[1]), {}};
    if (!r[2].is_list())
      throw Error(ErrorKind::BadToken, "expected a production list", r[2].loc());
    for (const auto & prod : r[2].items()) {
      if (prod.has_head("Constant") || prod.has_head("Variable"))
        throw Error(ErrorKind::UnsupportedConstruct,
                    "(" + prod[0].name() + " ...) productions are not supported", prod.loc());
      nt.productions.push_back(prod);
    }
    g.push_back(std::move(nt));
  }
  if (g.empty()) throw Error(ErrorKind::MissingGrammar, "empty grammar", fn.loc());
  return g;
}

}  // namespace

SygusProblem parse_sygus(std::string_view text)
{
  SygusProblem p;
  bool have_fun = false;
  for (const auto & cmd : read_sexprs(text)) {
    if (!cmd.is_list() || cmd.size() == 0 || !cmd[0].is_symbol())
      throw Error(ErrorKind::UnknownCommand, "expected a command", cmd.loc());
    const std::string & head = cmd[0].name();
    if (head == "set-logic" && cmd.size() == 2 && cmd[1].is_symbol()) {
      p.logic = cmd[1].name();
    } else if (head == "set-option" || head == "set-info") {
      continue;
    } else if (head == "synth-fun") {
      if (have_fun)
        throw Error(ErrorKind::UnsupportedConstruct, "more than one synth-fun", cmd.loc());
      if (cmd.size() < 4 || !cmd[1].is_symbol())
        throw Error(ErrorKind::ArityMismatch, "malformed synth-fun", cmd.loc());
      have_fun = true;
      p.name = cmd[1].name();
      p.params = read_params(cmd[2]);
      p.ret = read_sort(cmd[3]);
      if (cmd.size() == 6 && is_grammar_block(cmd[4], 2) && is_grammar_block(cmd[5], 3)) {
        p.grammar = read_grammar(cmd[5], cmd);
        // the predeclaration fixes the order; the start symbol comes first
        if (cmd[4].size() != p.grammar.size())
          throw Error(ErrorKind::ArityMismatch, "grammar predeclaration does not match rules",
                      cmd[4].loc());
        for (size_t i = 0; i < p.grammar.size(); ++i)
          if (cmd[4][i][0].name() != p.grammar[i].name)
            throw Error(ErrorKind::UnresolvedName,
                        "grammar rule order differs from its predeclaration", cmd[4][i].loc());
      } else if (cmd.size() == 5 && is_grammar_block(cmd[4], 3)) {
        p.grammar = read_grammar(cmd[4], cmd);
      } else if (cmd.size() == 4) {
        throw Error(ErrorKind::MissingGrammar, "synth-fun " + p.name + " has no grammar",
                    cmd.loc());
      } else {
        throw Error(ErrorKind::BadToken, "malformed grammar for " + p.name, cmd.loc());
      }
    } else if (head == "declare-var" && cmd.size() == 3 && cmd[1].is_symbol()) {
      p.variables.push_back({cmd[1].name(), read_sort(cmd[2])});
    } else if (head == "constraint" && cmd.size() == 2) {
      p.constraints.push_back(cmd[1]);
    } else if (head == "check-synth") {
      continue;
    } else if (head == "define-fun" || head == "synth-inv" || head == "inv-constraint") {
      throw Error(ErrorKind::UnsupportedConstruct, head + " is not supported", cmd.loc());
    } else {
      throw Error(ErrorKind::UnknownCommand, "unknown command " + head, cmd.loc());
    }
  }
  if (!have_fun) throw Error(ErrorKind::AbsentSynthTarget, "no synth-fun");
  return p;
}

std::string print_sygus(const SygusProblem & p)
{
  std::ostringstream o;
  o << "(set-logic " << p.logic << ")\n";
  o << "(synth-fun " << quote_symbol(p.name) << " (";
  for (size_t i = 0; i < p.params.size(); ++i)
    o << (i ? " " : "") << "(" << quote_symbol(p.params[i].name) << " " << p.params[i].sort.str() << ")";
  o << ") " << p.ret.str() << "\n  (";
  for (size_t i = 0; i < p.grammar.size(); ++i)
    o << (i ? " " : "") << "(" << quote_symbol(p.grammar[i].name) << " " << p.grammar[i].sort.str() << ")";
  o << ")\n  (";
  for (size_t i = 0; i < p.grammar.size(); ++i) {
    const auto & nt = p.grammar[i];
    o << (i ? "\n   " : "") << "(" << quote_symbol(nt.name) << " " << nt.sort.str() << " (";
    for (size_t k = 0; k < nt.productions.size(); ++k)
      o << (k ? " " : "") << print_sexpr(nt.productions[k]);
    o << "))";
  }
  o << "))\n";
  for (const auto & v : p.variables)
    o << "(declare-var " << quote_symbol(v.name) << " " << v.sort.str() << ")\n";
  for (const auto & c : p.constraints) o << "(constraint " << print_sexpr(c) << ")\n";
  o << "(check-synth)\n";
  return o.str();
}

// ---------------------------------------------------------------------------
// SyGuS -> SemGuS

namespace {

class Names
{
 public:
  void reserve(const std::string & n) { used_.insert(n); }
  std::string fresh(const std::string & base)
  {
    std::string n = base;
    for (int k = 2; used_.count(n); ++k) n = base + "_" + std::to_string(k);
    used_.insert(n);
    return n;
  }

 private:
  std::set<std::string> used_;
};

std::string constructor_base(const SExpr & prod)
{
  std::string base;
  switch (prod.kind()) {
    case SExpr::Kind::Symbol: base = prod.name(); break;
    case SExpr::Kind::Numeral: base = prod.numeral().str(); break;
    case SExpr::Kind::Bool: base = prod.boolean() ? "true" : "false"; break;
    case SExpr::Kind::List:
      base = prod.size() && prod[0].is_symbol() ? prod[0].name() : "c";
      if (base == "-" && prod.size() == 2 && prod[1].kind() == SExpr::Kind::Numeral)
        base = "-" + prod[1].numeral().str();
      break;
    default: base = "c"; break;
  }
  std::string out = "$";
  for (char ch : base) out += is_simple_symbol(std::string(1, ch)) || std::isdigit(static_cast<unsigned char>(ch)) ? ch : '_';
  return out;
}

struct Translator
{
  const SygusProblem & p;
  std::map<std::string, int> nt_index;
  std::set<std::string> param_names;

  explicit Translator(const SygusProblem & p) : p(p)
  {
    for (size_t i = 0; i < p.grammar.size(); ++i) {
      if (!nt_index.emplace(p.grammar[i].name, static_cast<int>(i)).second)
        throw Error(ErrorKind::DuplicateDeclaration, "nonterminal " + p.grammar[i].name + " declared twice");
    }
    for (const auto & v : p.params) param_names.insert(v.name);
  }

  void check_schema(const SExpr & e, bool head) const
  {
    if (e.is_symbol()) {
      if (head) {
        if (!op_from_name(e.name()))
          throw Error(ErrorKind::UnsupportedTheory, "unsupported operator " + e.name(), e.loc());
        return;
      }
      if (!nt_index.count(e.name()) && !param_names.count(e.name()))
        throw Error(ErrorKind::UnresolvedName, "unknown symbol " + e.name() + " in grammar", e.loc());
      return;
    }
    if (!e.is_list()) {
      Value v;
      if (!literal_value(e, v))
        throw Error(ErrorKind::UnsupportedTheory, "unsupported literal " + print_sexpr(e), e.loc());
      return;
    }
    Value v;
    if (literal_value(e, v)) return;
    if (e.size() < 2 || !e[0].is_symbol())
      throw Error(ErrorKind::UnsupportedConstruct, "unsupported term " + print_sexpr(e), e.loc());
    check_schema(e[0], true);
    for (size_t i = 1; i < e.size(); ++i) check_schema(e[i], false);
  }

  // replaces nonterminal occurrences left to right by `outs`, recording their types
  SExpr abstract(const SExpr & e, std::vector<int> & kids, Names & names,
                 std::vector<std::string> & outs) const
  {
    if (e.is_symbol()) {
      auto it = nt_index.find(e.name());
      if (it == nt_index.end()) return e;
      kids.push_back(it->second);
      outs.push_back(names.fresh("c" + std::to_string(kids.size())));
      return SExpr::symbol(outs.back());
    }
    if (!e.is_list()) return e;
    std::vector<SExpr> items;
    for (size_t i = 0; i < e.size(); ++i)
      items.push_back(i == 0 ? e[0] : abstract(e[i], kids, names, outs));
    return SExpr::list(std::move(items));
  }
};

// Replace every application of `fn` (innermost first) by a fresh output
// variable and record the relation application that defines it.
SExpr lift_calls(const SExpr & e, const SygusProblem & p, const std::string & rel,
                 Names & names, std::vector<std::pair<std::string, SExpr>> & calls)
{
  if (e.is_symbol(p.name))
    throw Error(ErrorKind::HigherOrderConstraint,
                p.name + " is used as a value, not applied", e.loc());
  if (!e.is_list() || e.size() == 0) return e;
  if (e[0].is_symbol("forall") || e[0].is_symbol("exists") || e[0].is_symbol("let")) {
    std::vector<std::pair<std::string, SExpr>> inner;
    lift_calls(e.items().back(), p, rel, names, inner);
    if (!inner.empty())
      throw Error(ErrorKind::HigherOrderConstraint,
                  p.name + " is applied under a binder", e.loc());
    return e;
  }
  std::vector<SExpr> items;
  for (size_t i = 0; i < e.size(); ++i)
    items.push_back(i == 0 && e[0].is_symbol() ? e[0] : lift_calls(e[i], p, rel, names, calls));
  if (!e[0].is_symbol(p.name)) return SExpr::list(std::move(items));
  if (items.size() - 1 != p.params.size())
    throw Error(ErrorKind::ArityMismatch,
                p.name + " expects " + std::to_string(p.params.size()) + " arguments", e.loc());
  std::string o = names.fresh("_o" + std::to_string(calls.size()));
  std::vector<SExpr> app{SExpr::symbol(rel), SExpr::symbol(p.name)};
  for (size_t i = 1; i < items.size(); ++i) app.push_back(items[i]);
  app.push_back(SExpr::symbol(o));
  calls.emplace_back(o, SExpr::list(std::move(app)));
  return SExpr::symbol(o);
}

std::set<std::string> param_names_of(const SygusProblem & p)
{
  std::set<std::string> out;
  for (const auto & v : p.variables) out.insert(v.name);
  return out;
}

// Function symbols other than the target must come from the theory.
void check_constraint(const SExpr & e, const SygusProblem & p, const std::set<std::string> & bound)
{
  if (!e.is_list() || e.size() == 0 || e[0].is_symbol("_")) return;
  size_t from = 1;
  if (e[0].is_symbol("forall") || e[0].is_symbol("exists") || e[0].is_symbol("let")) {
    from = 2;
  } else if (e[0].is_symbol() && !e[0].is_symbol(p.name) && !op_from_name(e[0].name()) &&
             !bound.count(e[0].name())) {
    throw Error(ErrorKind::UnsupportedTheory, "unsupported function " + e[0].name(), e[0].loc());
  } else if (!e[0].is_symbol()) {
    from = 0;
  }
  for (size_t i = from; i < e.size(); ++i) check_constraint(e[i], p, bound);
}

}  // namespace

std::string sygus_to_semgus_text(const SygusProblem & p)
{
  Translator tr(p);
  for (const auto & v : p.params) read_sort(v.sort.to_sexpr());
  if (p.grammar.empty()) throw Error(ErrorKind::MissingGrammar, "synth-fun " + p.name + " has no grammar");
  if (!(p.grammar[0].sort == p.ret))
    throw Error(ErrorKind::SortMismatch, "start symbol sort differs from the function's");

  for (const auto & nt : p.grammar)
    if (nt.productions.empty())
      throw Error(ErrorKind::EmptySemantics, "nonterminal " + nt.name + " has no productions");
  std::set<std::string> bound(param_names_of(p));
  for (const auto & c : p.constraints) check_constraint(c, p, bound);

  Names global;
  global.reserve(p.name);
  for (const auto & v : p.params) global.reserve(v.name);
  for (const auto & v : p.variables) global.reserve(v.name);
  for (const auto & nt : p.grammar) {
    global.reserve(nt.name);
    global.reserve(nt.name + ".Sem");
  }
  const std::string t = global.fresh("t");
  const std::string out = global.fresh("out");

  std::vector<std::vector<std::string>> ctor_names(p.grammar.size());
  for (size_t i = 0; i < p.grammar.size(); ++i)
    for (const auto & prod : p.grammar[i].productions) {
      tr.check_schema(prod, false);
      ctor_names[i].push_back(global.fresh(constructor_base(prod)));
    }

  std::ostringstream o;
  o << ";; Translated from a SyGuS problem.\n";
  o << "(set-logic " << p.logic << ")\n";
  o << "(declare-term-types (";
  for (size_t i = 0; i < p.grammar.size(); ++i)
    o << (i ? " " : "") << "(" << quote_symbol(p.grammar[i].name) << " 0)";
  o << ")\n (";
  std::vector<std::vector<std::vector<int>>> kids(p.grammar.size());
  std::vector<std::vector<SExpr>> bodies(p.grammar.size());
  for (size_t i = 0; i < p.grammar.size(); ++i) {
    o << (i ? "\n  (" : "(");
    const auto & nt = p.grammar[i];
    for (size_t k = 0; k < nt.productions.size(); ++k) {
      Names local = global;
      std::vector<int> ks;
      std::vector<std::string> outs;
      SExpr schema = tr.abstract(nt.productions[k], ks, local, outs);
      o << (k ? " " : "") << "(" << quote_symbol(ctor_names[i][k]);
      std::vector<std::string> child_terms;
      for (size_t c = 0; c < ks.size(); ++c) {
        o << " " << quote_symbol(p.grammar[ks[c]].name);
        child_terms.push_back(local.fresh(t + std::to_string(c + 1)));
      }
      o << ")";

      std::vector<SExpr> pattern{SExpr::symbol(ctor_names[i][k])};
      for (const auto & ct : child_terms) pattern.push_back(SExpr::symbol(ct));
      SExpr eq = SExpr::list({SExpr::symbol("="), SExpr::symbol(out), schema});
      SExpr body = eq;
      if (!ks.empty()) {
        std::vector<SExpr> binders, conj{SExpr::symbol("and")};
        for (size_t c = 0; c < ks.size(); ++c) {
          binders.push_back(SExpr::list({SExpr::symbol(outs[c]), p.grammar[ks[c]].sort.to_sexpr()}));
          std::vector<SExpr> app{SExpr::symbol(p.grammar[ks[c]].name + ".Sem"),
                                 SExpr::symbol(child_terms[c])};
          for (const auto & v : p.params) app.push_back(SExpr::symbol(v.name));
          app.push_back(SExpr::symbol(outs[c]));
          conj.push_back(SExpr::list(std::move(app)));
        }
        conj.push_back(eq);
        body = SExpr::list({SExpr::symbol("exists"), SExpr::list(std::move(binders)),
                            SExpr::list(std::move(conj))});
      }
      bodies[i].push_back(SExpr::list({SExpr::list(std::move(pattern)), body}));
    }
    o << ")";
  }
  o << "))\n";

  std::string inputs;
  for (const auto & v : p.params) inputs += (inputs.empty() ? "" : " ") + quote_symbol(v.name);
  o << "(define-funs-rec\n (";
  for (size_t i = 0; i < p.grammar.size(); ++i) {
    const auto & nt = p.grammar[i];
    o << (i ? "\n  (" : "(") << quote_symbol(nt.name + ".Sem") << " ((" << t << " "
      << quote_symbol(nt.name) << ")";
    for (const auto & v : p.params) o << " (" << quote_symbol(v.name) << " " << v.sort.str() << ")";
    o << " (" << out << " " << nt.sort.str() << ")) Bool)";
  }
  o << ")\n (";
  for (size_t i = 0; i < p.grammar.size(); ++i) {
    o << (i ? "\n  " : "") << "(! (match " << t << " (";
    for (size_t k = 0; k < bodies[i].size(); ++k)
      o << (k ? "\n     " : "") << print_sexpr(bodies[i][k]);
    o << "))\n     :input (" << inputs << ") :output (" << out << "))";
  }
  o << "))\n";
  o << "(synth-fun " << quote_symbol(p.name) << " () " << quote_symbol(p.grammar[0].name) << ")\n";
  for (const auto & v : p.variables)
    o << "(declare-var " << quote_symbol(v.name) << " " << v.sort.str() << ")\n";

  const std::string rel = p.grammar[0].name + ".Sem";
  for (const auto & c : p.constraints) {
    Names local = global;
    std::vector<std::pair<std::string, SExpr>> calls;
    SExpr phi = lift_calls(c, p, rel, local, calls);
    if (calls.empty()) {
      o << "(constraint " << print_sexpr(phi) << ")\n";
      continue;
    }
    std::vector<SExpr> binders, conj{SExpr::symbol("and"), phi};
    for (auto & [name, app] : calls) {
      binders.push_back(SExpr::list({SExpr::symbol(name), p.ret.to_sexpr()}));
      conj.push_back(app);
    }
    SExpr f = SExpr::list({SExpr::symbol("exists"), SExpr::list(std::move(binders)),
                           SExpr::list(std::move(conj))});
    o << "(constraint " << print_sexpr(f) << ")\n";
  }
  o << "(check-synth)\n";
  return o.str();
}

SynthesisProblem sygus_to_semgus(const SygusProblem & p)
{
  return parse_problem(sygus_to_semgus_text(p));
}

// ---------------------------------------------------------------------------
// SemGuS -> SyGuS

namespace {

[[noreturn]] void not_in_fragment(const std::string & why, SourceLoc loc = {})
{
  throw Error(ErrorKind::NotInFragment, why, loc);
}

size_t occurrences(const Formula & f, const std::string & v)
{
  if (f.is_var()) return f.name() == v ? 1 : 0;
  size_t n = 0;
  for (const auto & a : f.args()) n += occurrences(a, v);
  return n;
}

struct Inverter
{
  const SynthesisProblem & p;
  std::string target;
  std::string start_rel;
  SygusProblem out;

  SExpr call(const Formula & app, std::map<std::string, SExpr> & sub)
  {
    const auto & r = p.relations[p.find_relation(app.name())];
    std::vector<SExpr> items{SExpr::symbol(out.name)};
    for (size_t i : r.inputs) items.push_back(convert(app.args()[r.value_index(i)], sub));
    return SExpr::list(std::move(items));
  }

  SExpr convert(const Formula & f, std::map<std::string, SExpr> & sub)
  {
    switch (f.kind()) {
      case Formula::Kind::Var: {
        auto it = sub.find(f.name());
        return it == sub.end() ? f.to_sexpr() : it->second;
      }
      case Formula::Kind::Literal: return f.to_sexpr();
      case Formula::Kind::App: {
        std::vector<SExpr> items{SExpr::symbol(std::string(op_name(f.op())))};
        for (const auto & a : f.args()) items.push_back(convert(a, sub));
        return SExpr::list(std::move(items));
      }
      case Formula::Kind::RelApp: {
        if (f.name() != start_rel || f.term() != target)
          not_in_fragment("constraint applies " + f.name() + " to " + f.term(), f.loc());
        const auto & r = p.relations[p.find_relation(f.name())];
        SExpr o = convert(f.args()[r.value_index(r.outputs[0])], sub);
        return SExpr::list({SExpr::symbol("="), call(f, sub), o});
      }
      case Formula::Kind::Quant: break;
    }
    if (!f.is_forall()) {
      if (auto e = embedded(f, sub)) return *e;
    }
    std::vector<SExpr> bs;
    for (const auto & b : f.binders())
      bs.push_back(SExpr::list({SExpr::symbol(b.name), b.sort.to_sexpr()}));
    std::map<std::string, SExpr> inner = sub;
    for (const auto & b : f.binders()) inner.erase(b.name);
    return SExpr::list({SExpr::symbol(f.is_forall() ? "forall" : "exists"),
                        SExpr::list(std::move(bs)), convert(f.body(), inner)});
  }

  // (exists (o..) (and phi (R g args o)..)) -> phi[o := (g args)]
  std::optional<SExpr> embedded(const Formula & f, std::map<std::string, SExpr> & sub)
  {
    const Formula & body = f.body();
    std::vector<Formula> conj;
    if (body.kind() == Formula::Kind::App && body.op() == Op::And) conj = body.args();
    else conj = {body};
    std::set<std::string> open;
    for (const auto & b : f.binders()) open.insert(b.name);
    std::map<std::string, SExpr> inner = sub;
    for (const auto & b : f.binders()) inner.erase(b.name);
    std::vector<Formula> rest;
    for (const auto & c : conj) {
      if (c.kind() == Formula::Kind::RelApp && c.name() == start_rel && c.term() == target) {
        const auto & r = p.relations[p.find_relation(c.name())];
        const Formula & o = c.args()[r.value_index(r.outputs[0])];
        bool inputs_closed = true;
        for (size_t i : r.inputs)
          for (const auto & v : c.args()[r.value_index(i)].free_vars())
            if (open.count(v)) inputs_closed = false;
        if (o.is_var() && open.count(o.name()) && inputs_closed) {
          inner[o.name()] = call(c, inner);
          open.erase(o.name());
          continue;
        }
      }
      rest.push_back(c);
    }
    if (!open.empty()) return std::nullopt;
    if (rest.empty()) return SExpr::boolean(true);
    if (rest.size() == 1) return convert(rest[0], inner);
    std::vector<SExpr> items{SExpr::symbol("and")};
    for (const auto & r : rest) items.push_back(convert(r, inner));
    return SExpr::list(std::move(items));
  }
};

}  // namespace

SygusProblem semgus_to_sygus(const SynthesisProblem & p)
{
  if (!p.target) not_in_fragment("no synth-fun");
  PlanTable plans = operationalize_all(p);
  if (!plans.ok()) not_in_fragment("not operationalizable: " + plans.errors.front().detail(),
                                   plans.errors.front().loc());

  Inverter inv{p, p.target->name, "", {}};
  SygusProblem & s = inv.out;
  s.name = p.target->name;
  for (const auto & m : p.metadata)
    if (m.has_head("set-logic") && m.size() == 2 && m[1].is_symbol()) s.logic = m[1].name();

  // term types reachable from the target's, in discovery order
  std::vector<std::string> types{p.target->term_type};
  for (size_t i = 0; i < types.size(); ++i) {
    const auto & tt = p.term_types[p.find_term_type(types[i])];
    for (int c : tt.constructors)
      for (const auto & child : p.constructors[c].children)
        if (std::find(types.begin(), types.end(), child) == types.end()) types.push_back(child);
  }

  std::vector<int> rel_of;
  for (const auto & tt : types) {
    auto rels = p.relations_for(tt);
    if (rels.size() != 1)
      not_in_fragment(tt + " has " + std::to_string(rels.size()) + " semantic relations");
    const auto & r = p.relations[rels[0]];
    if (r.outputs.size() != 1)
      not_in_fragment(r.name + " has " + std::to_string(r.outputs.size()) + " outputs", r.loc);
    if (r.inputs.size() + 1 != r.value_params().size())
      not_in_fragment(r.name + " has unannotated parameters", r.loc);
    rel_of.push_back(rels[0]);
  }
  const auto & start = p.relations[rel_of[0]];
  inv.start_rel = start.name;
  for (size_t i : start.inputs) s.params.push_back(start.params[i]);
  s.ret = start.params[start.outputs[0]].sort;

  std::set<std::string> param_names;
  for (const auto & v : s.params) param_names.insert(v.name);
  for (const auto & tt : types)
    if (param_names.count(tt)) not_in_fragment("term type " + tt + " shadows a parameter");

  for (size_t k = 0; k < types.size(); ++k) {
    const auto & r = p.relations[rel_of[k]];
    if (r.inputs.size() != s.params.size())
      not_in_fragment(r.name + " does not take the function's inputs", r.loc);
    std::map<std::string, Formula> rename;
    for (size_t j = 0; j < r.inputs.size(); ++j) {
      if (!(r.params[r.inputs[j]].sort == s.params[j].sort))
        not_in_fragment(r.name + " input sorts differ from the function's", r.loc);
      rename.emplace(r.params[r.inputs[j]].name, Formula::var(s.params[j].name));
    }

    SygusNonterminal nt{types[k], r.params[r.outputs[0]].sort, {}};
    for (int c : p.term_types[p.find_term_type(types[k])].constructors) {
      const Constructor & ctor = p.constructors[c];
      const auto * ps = plans.find(r.name, c);
      if (!ps || ps->size() != 1)
        not_in_fragment(ctor.name + " has " + std::to_string(ps ? ps->size() : 0) +
                            " CHCs for " + r.name, ctor.loc);
      const EvaluationPlan & plan = ps->front();
      const SourceLoc loc = p.chcs[plan.chc].loc;
      std::map<std::string, Formula> env = rename;
      std::vector<std::string> child_out(ctor.arity());
      for (const auto & ins : plan.instructions) {
        if (ins.kind == Instruction::Kind::Guard)
          not_in_fragment("CHC for " + ctor.name + " has a guard: " + ins.formula.str(), ins.loc);
        if (ins.kind == Instruction::Kind::Compute) {
          env[ins.target] = ins.formula.substitute(env);
          continue;
        }
        if (ins.child < 0) not_in_fragment(ctor.name + " is recursive on itself", ins.loc);
        if (!child_out[ins.child].empty())
          not_in_fragment(ctor.name + " evaluates a child twice", ins.loc);
        if (ins.in_vars != plan.inputs)
          not_in_fragment(ctor.name + " changes the inputs of a child", ins.loc);
        child_out[ins.child] = ins.out_vars[0];
      }
      auto it = env.find(plan.outputs[0]);
      if (it == env.end()) not_in_fragment(ctor.name + " does not define its output", loc);
      Formula expr = it->second;
      std::map<std::string, Formula> to_nt;
      for (size_t i = 0; i < child_out.size(); ++i) {
        if (child_out[i].empty() || occurrences(expr, child_out[i]) != 1)
          not_in_fragment(ctor.name + " does not use child " + std::to_string(i + 1) +
                              " exactly once", loc);
        to_nt.emplace(child_out[i], Formula::var(ctor.children[i]));
      }
      for (const auto & v : expr.free_vars())
        if (!param_names.count(v) && !to_nt.count(v))
          not_in_fragment(ctor.name + " output depends on " + v, loc);
      nt.productions.push_back(expr.substitute(to_nt).to_sexpr());
    }
    s.grammar.push_back(std::move(nt));
  }

  s.variables = p.variables;
  for (const auto & c : p.constraints) {
    std::map<std::string, SExpr> sub;
    s.constraints.push_back(inv.convert(c.formula, sub));
  }
  return s;
}

}  // namespace semgus
