#pragma once

#include <optional>
#include <string>
#include <vector>

#include "semgus/spec.hpp"

namespace semgus {

struct SmtQuery
{
  enum class Expect
  {
    Sat,    // ground constraints asserted positively
    Unsat,  // negated universal constraint
  };
  Expect expect = Expect::Sat;
  int constraint = -1;  // -1 for the combined ground query
  std::vector<TypedVar> vars;  // declared constants (universal variables)
  std::string text;            // complete script, definitions included
};

struct SmtScript
{
  std::string definitions;  // set-logic plus all function definitions
  std::vector<std::string> functions;  // one per (node, relation)
  size_t recursive_functions = 0;      // defined inside define-funs-rec
  size_t positive_assertions = 0;
  std::vector<SmtQuery> queries;

  std::string text() const;  // every query, separated by (reset)
};

/// Encode `term` as one SMT function per reachable (node, relation) and the
/// constraints as queries over the root functions.
SmtScript emit_smt_script(const ProgramTerm & term, const SynthesisProblem & p);

struct SolverConfig
{
  std::string path = "z3";
  std::vector<std::string> args = {"-in", "-smt2"};
  double time_limit = 10.0;  // seconds
  size_t memory_mb = 0;      // hint only
};

/// z3 from PATH, overridable by the SEMGUS_SMT_SOLVER environment variable.
SolverConfig default_solver_config();
/// Arguments chosen by executable name (z3 or cvc4/cvc5).
SolverConfig solver_config_for(const std::string & path);

struct SolverRun
{
  bool timed_out = false;
  int exit_code = 0;
  std::string out, err;
};

/// Run the solver on `script` (written to stdin). Throws SolverCrash if it
/// cannot be started.
SolverRun run_solver(const SolverConfig & cfg, const std::string & script);

/// Parse `(define-fun v () S value)` entries of a get-model response.
Binding parse_model(const std::string & text, const std::vector<TypedVar> & vars);

struct VerificationResult
{
  enum class Status
  {
    Verified,
    Refuted,
    Inconclusive
  };
  Status status = Status::Inconclusive;
  int constraint = -1;  // refuted constraint, -1 for the ground group
  Binding counterexample;
  std::string reason;
  size_t queries = 0;
};

std::string_view to_string(VerificationResult::Status s);

/// Logical verification through the external solver. When `ev` is given,
/// counterexamples are replayed; one that does not replay is Inconclusive.
VerificationResult verify_logical(const ProgramTerm & term, const SynthesisProblem & p,
                                  const SolverConfig & cfg,
                                  const Evaluator * ev = nullptr);

}  // namespace semgus
