#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semgus/operationalizer.hpp"
#include "semgus/term.hpp"

namespace semgus {

enum class EvalMode
{
  FirstMatch,
  Strict
};

struct EvalOptions
{
  uint64_t fuel = 1'000'000;
  EvalMode mode = EvalMode::FirstMatch;
  // Non-tail recursion deeper than this is reported as FuelExhausted.
  uint32_t max_depth = 4000;
};

struct EvalOutcome
{
  enum class Status
  {
    Ok,
    FuelExhausted,
    GuardFailure,
    NondetAmbiguity
  };

  Status status = Status::GuardFailure;
  std::vector<Value> outputs;  // relation output order
  Binding output;              // output parameter name -> value (Ok only)
  uint64_t steps = 0;
  std::vector<int> chcs;  // NondetAmbiguity: CHC indices that all matched

  bool ok() const { return status == Status::Ok; }
};

std::string_view to_string(EvalOutcome::Status s);

/// A ground example: one application of `relation` to the target with every
/// value argument fixed (signature order, term excluded).
struct Example
{
  int relation = -1;
  std::vector<Value> args;
  bool operator==(const Example &) const = default;
};

struct ExampleResult
{
  bool pass = true;
  int failing = -1;  // index of the first failing example
  std::string reason;
  uint64_t steps = 0;
};

/// Executes program terms with plans compiled to slot-indexed instruction
/// arrays. Immutable after construction; evaluations are independent.
class Evaluator
{
 public:
  Evaluator(const SynthesisProblem & problem, const PlanTable & plans);
  ~Evaluator();
  Evaluator(const Evaluator &) = delete;
  Evaluator & operator=(const Evaluator &) = delete;

  const SynthesisProblem & problem() const { return problem_; }

  /// Inputs in the relation's input order.
  EvalOutcome evaluate(const ProgramTerm & term, int relation,
                       std::span<const Value> inputs,
                       const EvalOptions & opts = {}) const;
  /// Inputs by parameter name.
  EvalOutcome evaluate(const ProgramTerm & term, const std::string & relation,
                       const Binding & inputs, const EvalOptions & opts = {}) const;

  ExampleResult run_examples(const ProgramTerm & term,
                             const std::vector<Example> & examples,
                             const EvalOptions & opts = {}) const;

  /// Run one specific CHC (by index) at the root of `term` with all of its
  /// instructions (children evaluated normally). Returns every plan variable,
  /// or nullopt when a guard or child fails.
  std::optional<Binding> trace(const ProgramTerm & term, int chc,
                               const Binding & inputs,
                               const EvalOptions & opts = {}) const;

  struct Compiled;

 private:
  const SynthesisProblem & problem_;
  std::unique_ptr<Compiled> c_;
};

}  // namespace semgus
