#pragma once

#include <optional>
#include <string>
#include <vector>

#include "semgus/enumerators.hpp"
#include "semgus/smt.hpp"

namespace semgus {

enum class Strategy
{
  TopDown,
  BottomUpSize,
  BottomUpHeight
};

std::string_view to_string(Strategy s);
/// "top-down", "bottom-up-size", "bottom-up-height"
std::optional<Strategy> parse_strategy(std::string_view s);

struct SolveOptions
{
  Strategy strategy = Strategy::TopDown;
  EnumLimits limits;    // deadline is derived from `timeout` when set
  double timeout = 0;   // seconds, 0 = none
  EvalOptions eval;
  SolverConfig smt = default_solver_config();
  std::vector<BankHook> hooks;  // bottom-up only
};

struct CegisIteration
{
  ProgramTerm candidate;
  VerificationResult::Status outcome = VerificationResult::Status::Inconclusive;
  int constraint = -1;
  Binding counterexample;
  std::string reason;
  double seconds = 0;  // verifier time
};

struct SolveResult
{
  enum class Status
  {
    Solved,
    Exhausted,
    Budget,
    Timeout,
    Inconclusive,
    Memout
  };
  Status status = Status::Exhausted;
  std::optional<ProgramTerm> solution;
  uint64_t candidates = 0;   // terms drawn from the enumerator
  uint64_t evaluations = 0;  // example / instance runs
  size_t verifications = 0;  // verifier passes
  size_t counterexamples = 0;
  double seconds = 0;
  std::vector<CegisIteration> trace;
  std::vector<SpecInstance> instances;  // accumulated counterexample instances
};

std::string_view to_string(SolveResult::Status s);

/// Enumerate candidates against the accumulated example set; verify the
/// survivors logically (or, for example-only specs, confirm once) and feed
/// counterexamples back.
SolveResult cegis(const SynthesisProblem & p, const Evaluator & ev, const SolveOptions & opts);

/// Operationalize, then run cegis over the target grammar.
SolveResult solve(const SynthesisProblem & p, const SolveOptions & opts);

}  // namespace semgus
