#include "semgus/ir.hpp"

namespace semgus {

using nlohmann::json;

namespace {

const BigInt kJsonSafe = BigInt(1) << 53;

json sort_json(const Sort & s) { return sexpr_to_json(s.to_sexpr()); }

json typed_vars(const std::vector<TypedVar> & vs)
{
  json a = json::array();
  for (const auto & v : vs) a.push_back(json::array({v.name, sort_json(v.sort)}));
  return a;
}

json names(const std::vector<std::string> & v)
{
  json a = json::array();
  for (const auto & s : v) a.push_back(s);
  return a;
}

}  // namespace

json sexpr_to_json(const SExpr & e)
{
  switch (e.kind()) {
    case SExpr::Kind::Symbol: return e.name();
    case SExpr::Kind::Numeral: {
      const BigInt & v = e.numeral();
      if (abs(v) < kJsonSafe) return static_cast<long long>(v);
      return json{{"$int", v.str()}};
    }
    case SExpr::Kind::String: return json{{"$string", e.string_value()}};
    case SExpr::Kind::BitVec: return json{{"$bv", print_sexpr(e)}};
    case SExpr::Kind::Bool: return e.boolean();
    case SExpr::Kind::Keyword: return json{{"$keyword", e.name()}};
    case SExpr::Kind::List: {
      json a = json::array();
      for (const auto & x : e.items()) a.push_back(sexpr_to_json(x));
      return a;
    }
  }
  return nullptr;
}

SExpr sexpr_from_json(const json & j)
{
  if (j.is_string()) return SExpr::symbol(j.get<std::string>());
  if (j.is_boolean()) return SExpr::boolean(j.get<bool>());
  if (j.is_number_integer()) return SExpr::numeral(j.get<long long>());
  if (j.is_array()) {
    std::vector<SExpr> items;
    for (const auto & x : j) items.push_back(sexpr_from_json(x));
    return SExpr::list(std::move(items));
  }
  if (j.is_object() && j.size() == 1) {
    if (j.contains("$int")) return SExpr::numeral(BigInt(j["$int"].get<std::string>()));
    if (j.contains("$string")) return SExpr::string(j["$string"].get<std::string>());
    if (j.contains("$keyword")) return SExpr::keyword(j["$keyword"].get<std::string>());
    if (j.contains("$bv")) {
      auto parsed = read_sexprs(j["$bv"].get<std::string>());
      if (parsed.size() == 1 && parsed[0].kind() == SExpr::Kind::BitVec) return parsed[0];
    }
  }
  throw Error(ErrorKind::BadToken, "not an s-expression document: " + j.dump());
}

json to_json(const SynthesisProblem & p)
{
  json doc = json::array();
  if (p.empty()) return doc;

  json meta = json::array();
  for (const auto & m : p.metadata) meta.push_back(sexpr_to_json(m));
  doc.push_back(json{{"$version", "1.0"},
                     {"metadata", meta},
                     {"variables", typed_vars(p.variables)}});

  for (const auto & t : p.term_types)
    doc.push_back(json{{"$event", "declare-term-type"}, {"name", t.name}, {"arity", t.arity}});
  for (const auto & t : p.term_types)
    for (int c : t.constructors) {
      const auto & ctor = p.constructors[c];
      doc.push_back(json{{"$event", "define-constructor"},
                         {"termType", ctor.term_type},
                         {"name", ctor.name},
                         {"children", names(ctor.children)}});
    }
  for (const auto & r : p.relations) {
    json in = json::array(), out = json::array();
    for (size_t i : r.inputs) in.push_back(r.params[i].name);
    for (size_t i : r.outputs) out.push_back(r.params[i].name);
    doc.push_back(json{{"$event", "declare-semantics-relation"},
                       {"name", r.name},
                       {"params", typed_vars(r.params)},
                       {"termParam", r.term_param},
                       {"inputs", in},
                       {"outputs", out}});
  }
  for (const auto & c : p.chcs) {
    json body = json::array();
    for (const auto & app : c.body)
      body.push_back(json{{"relation", app.relation}, {"term", app.term}, {"args", names(app.args)}});
    json conj = json::array();
    for (const auto & f : c.conjuncts) conj.push_back(sexpr_to_json(f.to_sexpr()));
    doc.push_back(json{{"$event", "chc"},
                       {"relation", c.relation},
                       {"constructor", p.constructors[c.constructor].name},
                       {"alternative", c.alternative},
                       {"term", c.self_term},
                       {"children", names(c.child_terms)},
                       {"headArgs", names(c.head_args)},
                       {"aux", typed_vars(c.aux)},
                       {"body", body},
                       {"constraint", conj}});
  }
  if (p.target) {
    json g = nullptr;
    if (p.target->grammar) {
      const Grammar & gr = *p.target->grammar;
      json nts = json::array();
      for (const auto & nt : gr.nonterminals) {
        json prods = json::array();
        for (const auto & pr : nt.productions) {
          json kids = json::array();
          for (int k : pr.children) kids.push_back(gr.nonterminals[k].name);
          prods.push_back(json{{"constructor", p.constructors[pr.constructor].name},
                               {"children", kids}});
        }
        nts.push_back(json{{"name", nt.name}, {"termType", nt.term_type}, {"productions", prods}});
      }
      g = json{{"start", gr.nonterminals[gr.start].name}, {"nonterminals", nts}};
    }
    doc.push_back(json{{"$event", "synth-fun"},
                       {"name", p.target->name},
                       {"termType", p.target->term_type},
                       {"grammar", g}});
  }
  for (const auto & c : p.constraints)
    doc.push_back(json{{"$event", "constraint"}, {"formula", sexpr_to_json(c.formula.to_sexpr())}});
  if (p.check_synth) doc.push_back(json{{"$event", "check-synth"}});
  return doc;
}

// ---------------------------------------------------------------------------

std::string to_sexpr_dump(const SynthesisProblem & p)
{
  std::string out;
  auto line = [&](const SExpr & e) { out += print_sexpr(e) + "\n"; };
  auto sym = [](const std::string & s) { return SExpr::symbol(s); };
  auto tvars = [&](const std::vector<TypedVar> & vs) {
    std::vector<SExpr> items;
    for (const auto & v : vs) items.push_back(SExpr::list({sym(v.name), v.sort.to_sexpr()}));
    return SExpr::list(std::move(items));
  };
  auto syms = [&](const std::vector<std::string> & v) {
    std::vector<SExpr> items;
    for (const auto & s : v) items.push_back(sym(s));
    return SExpr::list(std::move(items));
  };

  for (const auto & m : p.metadata) line(m);
  for (const auto & t : p.term_types) {
    std::vector<SExpr> items{sym("term-type"), sym(t.name)};
    for (int c : t.constructors) {
      std::vector<SExpr> ctor{sym(p.constructors[c].name)};
      for (const auto & ch : p.constructors[c].children) ctor.push_back(sym(ch));
      items.push_back(SExpr::list(std::move(ctor)));
    }
    line(SExpr::list(std::move(items)));
  }
  for (const auto & r : p.relations) {
    std::vector<std::string> in, outs;
    for (size_t i : r.inputs) in.push_back(r.params[i].name);
    for (size_t i : r.outputs) outs.push_back(r.params[i].name);
    line(SExpr::list({sym("relation"), sym(r.name), tvars(r.params), SExpr::keyword("input"),
                      syms(in), SExpr::keyword("output"), syms(outs)}));
  }
  for (const auto & c : p.chcs) {
    std::vector<SExpr> pat{sym(p.constructors[c.constructor].name)};
    for (const auto & ch : c.child_terms) pat.push_back(sym(ch));
    std::vector<SExpr> conj{sym("and")};
    for (const auto & a : c.body) {
      std::vector<SExpr> app{sym(a.relation), sym(a.term)};
      for (const auto & x : a.args) app.push_back(sym(x));
      conj.push_back(SExpr::list(std::move(app)));
    }
    for (const auto & f : c.conjuncts) conj.push_back(f.to_sexpr());
    line(SExpr::list({sym("chc"), sym(c.relation), SExpr::list(std::move(pat)),
                      SExpr::numeral(c.alternative), tvars(c.aux), SExpr::list(std::move(conj))}));
  }
  if (p.target) line(SExpr::list({sym("synth-fun"), sym(p.target->name), sym(p.target->term_type)}));
  for (const auto & v : p.variables) line(SExpr::list({sym("declare-var"), sym(v.name), v.sort.to_sexpr()}));
  for (const auto & c : p.constraints) line(SExpr::list({sym("constraint"), c.formula.to_sexpr()}));
  if (p.check_synth) line(SExpr::list({sym("check-synth")}));
  return out;
}

}  // namespace semgus
