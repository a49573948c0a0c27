#include <gtest/gtest.h>

#include <set>

#include "semgus/ir.hpp"
#include "support.hpp"

using namespace semgus;
using nlohmann::json;
using testing_support::load;
using testing_support::slurp;
using testing_support::corpus;

namespace {

ErrorKind analysis_error(const std::string & text, std::string * detail = nullptr,
                         SourceLoc * loc = nullptr)
{
  try {
    parse_problem(text);
  } catch (const Error & e) {
    if (detail) *detail = e.detail();
    if (loc) *loc = e.loc();
    return e.kind();
  }
  ADD_FAILURE() << "accepted:\n" << text;
  return ErrorKind::IoError;
}

std::string replace_once(std::string s, const std::string & from, const std::string & to)
{
  auto at = s.find(from);
  EXPECT_NE(at, std::string::npos) << from;
  if (at != std::string::npos) s.replace(at, from.size(), to);
  return s;
}

// Test-only reader for the JSON document: rebuilds a problem from the events
// without going through the analyzer.
Sort read_sort(const json & j)
{
  Sort s;
  if (parse_value_sort(sexpr_from_json(j), s)) return s;
  return Sort::term(j.get<std::string>());
}

std::vector<TypedVar> read_vars(const json & a)
{
  std::vector<TypedVar> out;
  for (const auto & v : a) out.push_back({v[0].get<std::string>(), read_sort(v[1])});
  return out;
}

std::vector<std::string> read_names(const json & a)
{
  std::vector<std::string> out;
  for (const auto & s : a) out.push_back(s.get<std::string>());
  return out;
}

SynthesisProblem read_json(const json & doc)
{
  SynthesisProblem p;
  auto relation_named = [&](const std::string & n) { return p.find_relation(n) >= 0; };
  FormulaScope scope;
  scope.is_variable = [&](const std::string & n) { return !relation_named(n); };
  scope.is_relation = relation_named;
  scope.is_term = [](const std::string &) { return true; };

  for (const auto & ev : doc) {
    if (ev.contains("$version")) {
      for (const auto & m : ev["metadata"]) p.metadata.push_back(sexpr_from_json(m));
      p.variables = read_vars(ev["variables"]);
      continue;
    }
    std::string kind = ev["$event"];
    if (kind == "declare-term-type") {
      p.term_types.push_back({ev["name"], ev["arity"], {}, {}});
    } else if (kind == "define-constructor") {
      Constructor c{ev["name"], ev["termType"], read_names(ev["children"]), {}};
      p.term_types[p.find_term_type(c.term_type)].constructors.push_back(
          static_cast<int>(p.constructors.size()));
      p.constructors.push_back(c);
    } else if (kind == "declare-semantics-relation") {
      SemanticRelation r;
      r.name = ev["name"];
      r.params = read_vars(ev["params"]);
      r.term_param = ev["termParam"];
      auto index_of = [&](const std::string & n) {
        for (size_t i = 0; i < r.params.size(); ++i)
          if (r.params[i].name == n) return i;
        ADD_FAILURE() << "no parameter " << n;
        return size_t(0);
      };
      for (const auto & n : ev["inputs"]) r.inputs.push_back(index_of(n));
      for (const auto & n : ev["outputs"]) r.outputs.push_back(index_of(n));
      p.relations.push_back(r);
    } else if (kind == "chc") {
      Chc c;
      c.relation = ev["relation"];
      c.constructor = p.find_constructor(ev["constructor"]);
      c.alternative = ev["alternative"];
      c.self_term = ev["term"];
      c.child_terms = read_names(ev["children"]);
      c.head_args = read_names(ev["headArgs"]);
      c.aux = read_vars(ev["aux"]);
      for (const auto & b : ev["body"])
        c.body.push_back({b["relation"], b["term"], read_names(b["args"]), {}});
      for (const auto & f : ev["constraint"])
        c.conjuncts.push_back(parse_formula(sexpr_from_json(f), scope));
      p.chcs.push_back(c);
    } else if (kind == "synth-fun") {
      SynthTarget t{ev["name"], ev["termType"], std::nullopt};
      if (!ev["grammar"].is_null()) {
        Grammar g;
        for (const auto & nt : ev["grammar"]["nonterminals"])
          g.nonterminals.push_back({nt["name"], nt["termType"], {}});
        for (size_t i = 0; i < g.nonterminals.size(); ++i)
          for (const auto & pr : ev["grammar"]["nonterminals"][i]["productions"]) {
            Production prod;
            prod.constructor = p.find_constructor(pr["constructor"]);
            for (const auto & k : pr["children"]) prod.children.push_back(g.find(k));
            g.nonterminals[i].productions.push_back(prod);
          }
        g.start = g.find(ev["grammar"]["start"]);
        t.grammar = g;
      }
      p.target = t;
    } else if (kind == "constraint") {
      p.constraints.push_back({parse_formula(sexpr_from_json(ev["formula"]), scope), {}});
    } else if (kind == "check-synth") {
      p.check_synth = true;
    } else {
      ADD_FAILURE() << "unknown event " << kind;
    }
  }
  return p;
}

const std::set<std::string> kEvents = {"declare-term-type", "define-constructor",
                                       "declare-semantics-relation", "chc", "synth-fun",
                                       "constraint", "check-synth"};

}  // namespace

TEST(Analyze, MulProblemShape)
{
  auto p = load("semgus/mul.sem");
  ASSERT_EQ(p.term_types.size(), 4u);
  std::vector<std::string> names;
  for (const auto & t : p.term_types) names.push_back(t.name);
  EXPECT_EQ(names, (std::vector<std::string>{"F", "S", "E", "B"}));

  const auto & e = p.term_types[p.find_term_type("E")];
  std::vector<std::string> ctors;
  for (int c : e.constructors) ctors.push_back(p.constructors[c].name);
  EXPECT_EQ(ctors, (std::vector<std::string>{"$r", "$0", "$1", "$x", "$y", "$+", "$-"}));

  EXPECT_EQ(p.constraints.size(), 6u);
  ASSERT_TRUE(p.target);
  EXPECT_EQ(p.target->name, "mul");
  EXPECT_EQ(p.target->term_type, "F");
  EXPECT_FALSE(p.target->grammar);
  EXPECT_TRUE(p.check_synth);

  const auto & s = p.relations[p.find_relation("S.Sem")];
  EXPECT_EQ(s.term_param, 0u);
  EXPECT_EQ(s.inputs, (std::vector<size_t>{1, 2, 3}));
  EXPECT_EQ(s.outputs, (std::vector<size_t>{4, 5, 6}));
}

TEST(Analyze, NamesFullyResolved)
{
  for (const char * f : {"semgus/mul.sem", "semgus/max2.sem", "semgus/costed.sem", "semgus/swap.sem"}) {
    auto p = load(f);
    for (const auto & c : p.constructors) {
      EXPECT_GE(p.find_term_type(c.term_type), 0);
      for (const auto & ch : c.children) EXPECT_GE(p.find_term_type(ch), 0) << ch;
    }
    for (const auto & chc : p.chcs) {
      EXPECT_GE(p.find_relation(chc.relation), 0);
      ASSERT_GE(chc.constructor, 0);
      EXPECT_EQ(chc.child_terms.size(), p.constructors[chc.constructor].arity());
      for (const auto & app : chc.body) {
        EXPECT_GE(p.find_relation(app.relation), 0);
        EXPECT_NE(chc.term_index(app.term), -2) << app.term;
      }
    }
    // every constructor has semantics under every relation of its type
    for (size_t c = 0; c < p.constructors.size(); ++c)
      for (int r : p.relations_for(p.constructors[c].term_type))
        EXPECT_FALSE(p.chcs_for(p.relations[r].name, static_cast<int>(c)).empty());
  }
}

TEST(Analyze, Deterministic)
{
  std::string text = slurp(corpus("semgus/mul.sem"));
  EXPECT_EQ(parse_problem(text), parse_problem(text));
}

TEST(Analyze, OnlyCheckSynth)
{
  EXPECT_EQ(analysis_error("(check-synth)"), ErrorKind::AbsentSynthTarget);
}

TEST(Analyze, RemovedConstructorStillMatched)
{
  std::string text = slurp(corpus("semgus/mul.sem"));
  text = replace_once(text, "($noop) ($seq S S) ($while B S))", "($noop) ($while B S))");
  std::string detail;
  SourceLoc loc;
  EXPECT_EQ(analysis_error(text, &detail, &loc), ErrorKind::UnresolvedName);
  EXPECT_NE(detail.find("$seq"), std::string::npos) << detail;
  EXPECT_TRUE(loc.known());
}

TEST(Analyze, Errors)
{
  std::string mul = slurp(corpus("semgus/mul.sem"));
  EXPECT_EQ(analysis_error(mul + "(synth-fun other () F)"), ErrorKind::DuplicateDeclaration);
  EXPECT_EQ(analysis_error(mul + "(frobnicate)"), ErrorKind::UnknownCommand);
  EXPECT_EQ(analysis_error(replace_once(mul, "(synth-fun mul () F)", "(synth-fun mul () G)")),
            ErrorKind::UnresolvedName);
  EXPECT_EQ(analysis_error(replace_once(mul, "(F.Sem mul 5 3 15)", "(F.Sem mul 5 3)")),
            ErrorKind::ArityMismatch);
  EXPECT_EQ(analysis_error(replace_once(mul, "(F.Sem mul 5 3 15)", "(F.Sem mul 5 true 15)")),
            ErrorKind::IllSorted);
  EXPECT_EQ(analysis_error(replace_once(mul, "((F 0)", "((F 1)")), ErrorKind::UnsupportedArity);
  EXPECT_EQ(analysis_error(replace_once(mul, "(($r) ($0)", "(($r) ($r) ($0)")),
            ErrorKind::DuplicateDeclaration);
}

TEST(Analyze, MetadataPreserved)
{
  std::string mul = slurp(corpus("semgus/mul.sem"));
  auto p = parse_problem("(set-info :format-version \"1.0\")\n(set-option :foo 1)\n" + mul);
  ASSERT_EQ(p.metadata.size(), 2u);
  EXPECT_TRUE(p.metadata[0].has_head("set-info"));
}

TEST(Json, EmptyProblem)
{
  EXPECT_EQ(to_json(SynthesisProblem{}), json::array());
  EXPECT_THROW(analyze({}), Error);
}

TEST(Json, EventsForMul)
{
  auto doc = to_json(load("semgus/mul.sem"));
  ASSERT_TRUE(doc.is_array());
  EXPECT_EQ(doc[0]["$version"], "1.0");
  int term_types = 0, e_ctors = 0, chcs = 0;
  for (size_t i = 1; i < doc.size(); ++i) {
    std::string ev = doc[i]["$event"];
    EXPECT_TRUE(kEvents.count(ev)) << ev;
    term_types += ev == "declare-term-type";
    e_ctors += ev == "define-constructor" && doc[i]["termType"] == "E";
    chcs += ev == "chc";
  }
  EXPECT_EQ(term_types, 4);
  EXPECT_EQ(e_ctors, 7);
  EXPECT_EQ(chcs, 16);
}

TEST(Json, ReaderReconstructsProblem)
{
  for (const char * f : {"semgus/mul.sem", "semgus/max2.sem", "semgus/bvclear.sem",
                         "semgus/strings.sem", "semgus/costed.sem", "semgus/abs.sem",
                         "semgus/swap.sem", "semgus/sumto.sem"}) {
    auto p = load(f);
    auto doc = to_json(p);
    // through text, as a downstream tool would see it
    auto back = read_json(json::parse(doc.dump()));
    EXPECT_EQ(back, p) << f;
  }
}

TEST(Json, LargeIntegersTagged)
{
  auto e = read_sexprs("(f 9007199254740993 -3 #x0f \"s\" :k)")[0];
  auto j = sexpr_to_json(e);
  EXPECT_EQ(j[1]["$int"], "9007199254740993");
  EXPECT_EQ(sexpr_from_json(j), e);
}

TEST(Json, SexprDumpIsReadable)
{
  auto text = to_sexpr_dump(load("semgus/mul.sem"));
  EXPECT_NO_THROW(read_sexprs(text));
  EXPECT_NE(text.find("(term-type E ($r) ($0) ($1) ($x) ($y) ($+ E E) ($- E E))"),
            std::string::npos);
}
