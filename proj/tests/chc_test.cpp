#include <gtest/gtest.h>

#include "support.hpp"

using namespace semgus;
using testing_support::load;

namespace {

// A one-type language whose semantics body is spliced in.
std::string tiny(const std::string & ctors, const std::string & arms)
{
  return "(declare-term-types ((E 0)) ((" + ctors + ")))\n"
         "(define-funs-rec ((E.Sem ((t E) (x Int) (out Int)) Bool))\n"
         " ((! (match t (" + arms + ")) :input (x) :output (out))))\n"
         "(synth-fun f () E)\n(check-synth)\n";
}

ErrorKind error_of(const std::string & text)
{
  try {
    parse_problem(text);
  } catch (const Error & e) {
    EXPECT_TRUE(e.loc().known()) << e.what();
    return e.kind();
  }
  ADD_FAILURE() << "accepted:\n" << text;
  return ErrorKind::IoError;
}

std::vector<const Chc *> chcs_of(const SynthesisProblem & p, const std::string & ctor)
{
  std::vector<const Chc *> out;
  for (const auto & c : p.chcs)
    if (p.constructors[c.constructor].name == ctor) out.push_back(&c);
  return out;
}

bool has_conjunct(const Chc & c, const std::string & text)
{
  for (const auto & f : c.conjuncts)
    if (f.str() == text) return true;
  return false;
}

}  // namespace

TEST(Desugar, WhileHasTwoAlternatives)
{
  auto p = load("semgus/mul.sem");
  auto w = chcs_of(p, "$while");
  ASSERT_EQ(w.size(), 2u);
  EXPECT_EQ(w[0]->alternative, 0);
  EXPECT_EQ(w[1]->alternative, 1);

  const Chc & t = *w[0];
  ASSERT_EQ(t.body.size(), 3u);
  EXPECT_EQ(t.body[0].relation, "B.Sem");
  EXPECT_EQ(t.body[2].term, t.self_term);  // recursion on the loop itself

  const Chc & f = *w[1];
  ASSERT_EQ(f.body.size(), 1u);
  EXPECT_EQ(f.body[0].relation, "B.Sem");
  EXPECT_EQ(f.body[0].term, "tb");
  for (const char * c : {"(= b false)", "(= xo xi)", "(= yo yi)", "(= ro ri)"})
    EXPECT_TRUE(has_conjunct(f, c)) << c;
}

TEST(Desugar, Noop)
{
  auto p = load("semgus/mul.sem");
  auto n = chcs_of(p, "$noop");
  ASSERT_EQ(n.size(), 1u);
  EXPECT_TRUE(n[0]->body.empty());
  EXPECT_EQ(n[0]->constraint().str(), "(and (= xi xo) (= yi yo) (= ri ro))");
}

TEST(Desugar, TrueBody)
{
  auto text = "(declare-term-types ((U 0)) ((($u))))\n"
              "(define-funs-rec ((U.Sem ((t U) (x Int)) Bool))\n"
              " ((! (match t ((($u) true))) :input (x) :output ())))\n"
              "(synth-fun f () U)\n(check-synth)\n";
  auto p = parse_problem(text);
  ASSERT_EQ(p.chcs.size(), 1u);
  EXPECT_TRUE(p.chcs[0].body.empty());
  EXPECT_TRUE(p.chcs[0].constraint().is_true());
}

TEST(Desugar, CountPerTermType)
{
  auto p = load("semgus/mul.sem");
  size_t s_ctors = p.term_types[p.find_term_type("S")].constructors.size();
  size_t s_chcs = 0;
  for (const auto & c : p.chcs) s_chcs += c.relation == "S.Sem";
  EXPECT_EQ(s_chcs, s_ctors + 1);
}

TEST(Desugar, SourceOrderStable)
{
  auto p = load("semgus/mul.sem");
  std::vector<std::string> order;
  for (const auto & c : p.chcs)
    if (c.relation == "E.Sem") order.push_back(p.constructors[c.constructor].name);
  EXPECT_EQ(order, (std::vector<std::string>{"$r", "$0", "$1", "$x", "$y", "$+", "$-"}));
}

TEST(Desugar, EveryVariableClassified)
{
  for (const char * f : {"semgus/mul.sem", "semgus/sumto.sem", "semgus/bvclear.sem",
                         "semgus/strings.sem", "semgus/costed.sem", "semgus/max3.sem"}) {
    auto p = load(f);
    for (const auto & c : p.chcs) {
      std::set<std::string> head(c.head_args.begin(), c.head_args.end());
      EXPECT_EQ(head.size(), c.head_args.size()) << "head args distinct";
      std::set<std::string> aux;
      for (const auto & a : c.aux) aux.insert(a.name);
      std::set<std::string> terms(c.child_terms.begin(), c.child_terms.end());
      terms.insert(c.self_term);
      auto classify = [&](const std::string & v) {
        int kinds = head.count(v) + aux.count(v) + terms.count(v);
        EXPECT_EQ(kinds, 1) << f << ": " << v;
      };
      for (const auto & app : c.body) {
        classify(app.term);
        EXPECT_TRUE(terms.count(app.term));
        for (const auto & a : app.args) classify(a);
      }
      for (const auto & v : c.constraint().free_vars()) classify(v);
    }
  }
}

TEST(Desugar, Errors)
{
  std::string ok_arms = "(($z) (= out 0)) (($s e) (exists ((v Int)) (and (E.Sem e x v) (= out (+ v 1)))))";
  EXPECT_NO_THROW(parse_problem(tiny("($z) ($s E)", ok_arms)));

  EXPECT_EQ(error_of(tiny("($z) ($s E)", "(($z) (= out 0))")), ErrorKind::NonExhaustiveMatch);
  EXPECT_EQ(error_of(tiny("($z) ($s E)", ok_arms + " (($q) (= out 2))")),
            ErrorKind::UnresolvedName);
  // a constructor of another term type
  EXPECT_EQ(error_of("(declare-term-types ((E 0) (B 0)) ((($z)) (($t))))\n"
                     "(define-funs-rec ((E.Sem ((t E) (out Int)) Bool) (B.Sem ((t B) (out Bool)) Bool))\n"
                     " ((! (match t ((($z) (= out 0)) (($t) (= out 1)))) :input () :output (out))\n"
                     "  (! (match t ((($t) (= out true)))) :input () :output (out))))\n"
                     "(synth-fun f () E)\n(check-synth)\n"),
            ErrorKind::UnknownConstructor);
  EXPECT_EQ(error_of(tiny("($z) ($s E)", ok_arms + " (($z) (= out 1))")), ErrorKind::DuplicateArm);
  EXPECT_EQ(error_of(tiny("($z) ($s E)",
                          "(($z) (= out (+ true 1))) (($s e) (E.Sem e x out))")),
            ErrorKind::IllSorted);
  EXPECT_EQ(error_of(tiny("($z) ($s E)",
                          "(($z) (= out 0)) (($s e) (exists ((v Int)) (and (E.Sem e x v) "
                          "(exists ((w Int)) (= out w)))))")),
            ErrorKind::NestedQuantifier);
}

TEST(Desugar, DisjunctionStaysInOneChc)
{
  auto p = parse_problem(tiny("($z)", "(($z) (or (= out 0) (= out 1)))"));
  ASSERT_EQ(p.chcs.size(), 1u);
  EXPECT_EQ(p.chcs[0].conjuncts.size(), 1u);
  EXPECT_EQ(p.chcs[0].conjuncts[0].op(), Op::Or);
}

TEST(FormulaSort, Basics)
{
  FormulaScope scope;
  scope.is_variable = [](const std::string &) { return true; };
  auto f = [&](const char * s) { return parse_formula(read_sexprs(s)[0], scope); };

  SortEnv env;
  env.vars = {{"xi", Sort::int_sort()}, {"xo", Sort::int_sort()}, {"b", Sort::bool_sort()},
              {"o1", Sort::int_sort()}, {"o2", Sort::int_sort()}, {"out", Sort::bool_sort()},
              {"v", Sort::bitvec(8)}};
  EXPECT_EQ(formula_sort(f("(= xi xo)"), env), Sort::bool_sort());
  EXPECT_EQ(formula_sort(f("(= out (< o1 o2))"), env), Sort::bool_sort());
  EXPECT_EQ(formula_sort(f("(bvadd v #x01)"), env), Sort::bitvec(8));
  EXPECT_EQ(formula_sort(f("(ite b xi 3)"), env), Sort::int_sort());

  try {
    formula_sort(f("(+ b 1)"), env);
    FAIL() << "accepted (+ b 1)";
  } catch (const Error & e) {
    EXPECT_EQ(e.kind(), ErrorKind::IllSorted);
  }
  EXPECT_THROW(formula_sort(f("(bvadd v #x0001)"), env), Error);
  EXPECT_THROW(formula_sort(f("(= xi b)"), env), Error);
}

TEST(FormulaSort, MulSemanticsWellSorted)
{
  auto p = load("semgus/mul.sem");
  for (const auto & c : p.chcs) {
    SortEnv env;
    const auto & r = p.relations[p.find_relation(c.relation)];
    auto vp = r.value_params();
    for (size_t i = 0; i < vp.size(); ++i) env.vars[c.head_args[i]] = vp[i].sort;
    for (const auto & a : c.aux) env.vars[a.name] = a.sort;
    EXPECT_EQ(formula_sort(c.constraint(), env), Sort::bool_sort());
  }
}
