#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "semgus/problem.hpp"

namespace semgus {

struct Instruction
{
  enum class Kind
  {
    Invoke,
    Guard,
    Compute
  };

  Kind kind = Kind::Guard;
  // Invoke
  int child = -1;  // child index, or -1 for the node itself (SELF)
  std::string relation;
  std::vector<std::string> in_vars;   // callee input order
  std::vector<std::string> out_vars;  // callee output order
  // Guard / Compute
  Formula formula;
  std::string target;  // Compute only
  SourceLoc loc;

  std::string str() const;
  bool operator==(const Instruction &) const = default;
};

struct EvaluationPlan
{
  std::string relation;
  int constructor = -1;
  int alternative = 0;  // ordinal among the constructor's CHCs
  int chc = -1;         // index into SynthesisProblem::chcs
  std::vector<Instruction> instructions;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;

  std::string str() const;
  bool operator==(const EvaluationPlan &) const = default;
};

struct DataflowNode
{
  enum class Kind
  {
    Invoke,
    Compute,
    Guard
  };

  Kind kind = Kind::Guard;
  int index = -1;  // body app index (Invoke) or conjunct index
  std::set<std::string> defines;
  std::set<std::string> uses;
  SourceLoc loc;
};

struct DataflowGraph
{
  std::vector<DataflowNode> nodes;
  std::vector<std::pair<int, int>> edges;  // (definer, user)
};

/// Classify a CHC's atoms into invoke/compute/guard nodes.
/// Throws MissingAnnotation or DoubleWrite.
DataflowGraph build_dataflow(const Chc & chc, const SynthesisProblem & problem);

/// Topologically order the graph into a plan. Throws CyclicDataflow,
/// UngroundedInput or UndefinedOutput.
EvaluationPlan order_chc(const DataflowGraph & graph, const Chc & chc,
                         const SynthesisProblem & problem);

EvaluationPlan operationalize(const Chc & chc, const SynthesisProblem & problem);

struct PlanTable
{
  // (relation, constructor) -> plans in CHC declaration order. A key whose
  // CHCs did not all operationalize is absent.
  std::map<std::pair<std::string, int>, std::vector<EvaluationPlan>> plans;
  std::vector<Error> errors;

  bool ok() const { return errors.empty(); }
  const std::vector<EvaluationPlan> * find(const std::string & relation,
                                           int constructor) const;
  std::string str(const SynthesisProblem & problem) const;
};

PlanTable operationalize_all(const SynthesisProblem & problem);

}  // namespace semgus
