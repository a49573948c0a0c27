#include <gtest/gtest.h>

#include <filesystem>

#include "semgus/operationalizer.hpp"
#include "support.hpp"

using namespace semgus;
using testing_support::load;
using testing_support::slurp;
using testing_support::corpus;

namespace {

using Kind = Instruction::Kind;
using Names = std::set<std::string>;

const Chc & chc_of(const SynthesisProblem & p, const std::string & ctor, int alt = 0)
{
  for (const auto & c : p.chcs)
    if (p.constructors[c.constructor].name == ctor && c.alternative == alt) return c;
  throw std::runtime_error("no chc for " + ctor);
}

std::string lang(const std::string & arms, const std::string & annot = ":input (x) :output (out)")
{
  return "(declare-term-types ((E 0)) ((($z) ($d E E))))\n"
         "(define-funs-rec ((E.Sem ((t E) (x Int) (out Int)) Bool))\n"
         " ((! (match t (" + arms + ")) " + annot + ")))\n"
         "(synth-fun f () E)\n(check-synth)\n";
}

const std::string kZero = "(($z) (= out 0))";

ErrorKind op_error(const SynthesisProblem & p, const std::string & ctor)
{
  try {
    operationalize(chc_of(p, ctor), p);
  } catch (const Error & e) {
    EXPECT_TRUE(e.loc().known()) << e.what();
    return e.kind();
  }
  ADD_FAILURE() << "operationalized " << ctor;
  return ErrorKind::IoError;
}

std::vector<Kind> kinds(const EvaluationPlan & plan)
{
  std::vector<Kind> out;
  for (const auto & i : plan.instructions) out.push_back(i.kind);
  return out;
}

// Symbolic replay: no instruction reads a variable before it is defined and
// every output is defined at the end.
void check_valid(const EvaluationPlan & plan)
{
  Names defined(plan.inputs.begin(), plan.inputs.end());
  for (const auto & ins : plan.instructions) {
    switch (ins.kind) {
      case Kind::Invoke:
        for (const auto & v : ins.in_vars) EXPECT_TRUE(defined.count(v)) << plan.str();
        for (const auto & v : ins.out_vars) EXPECT_TRUE(defined.insert(v).second) << plan.str();
        break;
      case Kind::Guard:
        for (const auto & v : ins.formula.free_vars()) EXPECT_TRUE(defined.count(v)) << plan.str();
        break;
      case Kind::Compute:
        for (const auto & v : ins.formula.free_vars()) EXPECT_TRUE(defined.count(v)) << plan.str();
        EXPECT_TRUE(defined.insert(ins.target).second) << plan.str();
        break;
    }
  }
  for (const auto & o : plan.outputs) EXPECT_TRUE(defined.count(o)) << plan.str();
}

}  // namespace

TEST(Dataflow, WhileTrue)
{
  auto p = load("semgus/mul.sem");
  auto g = build_dataflow(chc_of(p, "$while", 0), p);
  std::vector<DataflowNode> inv, guards;
  for (const auto & n : g.nodes)
    (n.kind == DataflowNode::Kind::Invoke ? inv : guards).push_back(n);
  ASSERT_EQ(inv.size(), 3u);
  ASSERT_EQ(guards.size(), 1u);
  EXPECT_EQ(guards[0].kind, DataflowNode::Kind::Guard);
  EXPECT_EQ(inv[0].defines, (Names{"b"}));
  EXPECT_EQ(guards[0].uses, (Names{"b"}));
  EXPECT_EQ(inv[1].defines, (Names{"x1", "y1", "r1"}));
  EXPECT_EQ(inv[2].defines, (Names{"xo", "yo", "ro"}));
  EXPECT_EQ(inv[2].uses, (Names{"x1", "y1", "r1"}));
}

TEST(Dataflow, NoopComputes)
{
  auto p = load("semgus/mul.sem");
  auto g = build_dataflow(chc_of(p, "$noop"), p);
  ASSERT_EQ(g.nodes.size(), 3u);
  Names defined;
  for (const auto & n : g.nodes) {
    EXPECT_EQ(n.kind, DataflowNode::Kind::Compute);
    defined.insert(n.defines.begin(), n.defines.end());
  }
  EXPECT_EQ(defined, (Names{"xo", "yo", "ro"}));
}

TEST(Dataflow, DoubleWrite)
{
  auto p = parse_problem(lang(kZero + " (($d a b) (exists ((o Int)) (and (E.Sem a x o) (E.Sem b x o) (= out o))))"));
  try {
    build_dataflow(chc_of(p, "$d"), p);
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.kind(), ErrorKind::DoubleWrite);
    EXPECT_NE(e.detail().find("o"), std::string::npos);
  }
}

TEST(Order, WhileTruePlan)
{
  auto p = load("semgus/mul.sem");
  auto plan = operationalize(chc_of(p, "$while", 0), p);
  ASSERT_EQ(kinds(plan), (std::vector<Kind>{Kind::Invoke, Kind::Guard, Kind::Invoke, Kind::Invoke}));
  EXPECT_EQ(plan.instructions[0].relation, "B.Sem");
  EXPECT_EQ(plan.instructions[0].child, 0);
  EXPECT_EQ(plan.instructions[1].formula.str(), "(= b true)");
  EXPECT_EQ(plan.instructions[2].child, 1);
  EXPECT_EQ(plan.instructions[3].child, -1);
  EXPECT_EQ(plan.inputs, (std::vector<std::string>{"xi", "yi", "ri"}));
  EXPECT_EQ(plan.outputs, (std::vector<std::string>{"xo", "yo", "ro"}));
}

TEST(Order, SingleCompute)
{
  auto p = load("semgus/mul.sem");
  auto plan = operationalize(chc_of(p, "$0"), p);
  ASSERT_EQ(plan.instructions.size(), 1u);
  EXPECT_EQ(plan.instructions[0].kind, Kind::Compute);
  EXPECT_EQ(plan.instructions[0].target, "out");
  EXPECT_EQ(plan.instructions[0].formula.str(), "0");
}

TEST(Order, ReversedEquality)
{
  auto p = parse_problem(lang("(($z) (= 0 out)) (($d a b) (E.Sem a x out))"));
  auto plan = operationalize(chc_of(p, "$z"), p);
  ASSERT_EQ(kinds(plan), (std::vector<Kind>{Kind::Compute}));
}

TEST(Order, UngroundedInput)
{
  std::string text = slurp(corpus("semgus/mul.sem"));
  std::string drop = "              (S.Sem ts xi yi ri x1 y1 r1)\n";
  auto at = text.find(drop);
  ASSERT_NE(at, std::string::npos);
  text.erase(at, drop.size());
  auto p = parse_problem(text);
  EXPECT_EQ(op_error(p, "$while"), ErrorKind::UngroundedInput);
}

TEST(Order, CyclicDataflow)
{
  auto p = parse_problem(lang(kZero + " (($d a b) (exists ((v Int) (w Int)) (and (E.Sem a w v) (E.Sem b v w) (= out v))))"));
  EXPECT_EQ(op_error(p, "$d"), ErrorKind::CyclicDataflow);
}

TEST(Order, UndefinedOutput)
{
  auto p = parse_problem(lang(kZero + " (($d a b) true)"));
  EXPECT_EQ(op_error(p, "$d"), ErrorKind::UndefinedOutput);
  // a guard that would have to solve for the output
  auto q = parse_problem(lang(kZero + " (($d a b) (> out x))"));
  EXPECT_EQ(op_error(q, "$d"), ErrorKind::UngroundedInput);
}

TEST(Order, MissingAnnotation)
{
  auto p = parse_problem(lang(kZero + " (($d a b) (E.Sem a x out))", ""));
  EXPECT_EQ(op_error(p, "$z"), ErrorKind::MissingAnnotation);
}

TEST(OperationalizeAll, Mul)
{
  auto p = load("semgus/mul.sem");
  auto t = operationalize_all(p);
  EXPECT_TRUE(t.ok());
  const auto * w = t.find("S.Sem", p.find_constructor("$while"));
  ASSERT_NE(w, nullptr);
  ASSERT_EQ(w->size(), 2u);
  EXPECT_EQ((*w)[0].alternative, 0);
  EXPECT_EQ((*w)[1].alternative, 1);
  EXPECT_EQ(kinds((*w)[1]), (std::vector<Kind>{Kind::Invoke, Kind::Guard, Kind::Compute,
                                                Kind::Compute, Kind::Compute}));
}

TEST(OperationalizeAll, Empty)
{
  auto t = operationalize_all(SynthesisProblem{});
  EXPECT_TRUE(t.ok());
  EXPECT_TRUE(t.plans.empty());
}

TEST(OperationalizeAll, OneNondeterministicChc)
{
  auto p = parse_problem(lang(kZero + " (($d a b) (exists ((v Int)) (and (E.Sem a x v) (> out v))))"));
  auto t = operationalize_all(p);
  ASSERT_EQ(t.errors.size(), 1u);
  EXPECT_TRUE(t.errors[0].loc().known());
  EXPECT_NE(t.find("E.Sem", p.find_constructor("$z")), nullptr);
  EXPECT_EQ(t.find("E.Sem", p.find_constructor("$d")), nullptr);
}

TEST(OperationalizeAll, CorpusPlansValidAndDeterministic)
{
  int files = 0;
  for (const auto & entry : std::filesystem::directory_iterator(corpus("semgus"))) {
    auto p = parse_problem(slurp(entry.path()));
    auto t = operationalize_all(p);
    EXPECT_TRUE(t.ok()) << entry.path();
    size_t plans = 0;
    for (const auto & [key, list] : t.plans)
      for (const auto & plan : list) {
        check_valid(plan);
        ++plans;
      }
    EXPECT_EQ(plans, p.chcs.size()) << entry.path();
    EXPECT_EQ(operationalize_all(p).plans, t.plans);
    ++files;
  }
  EXPECT_GE(files, 15);
}
