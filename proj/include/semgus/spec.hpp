#pragma once

#include <optional>
#include <vector>

#include "semgus/evaluator.hpp"

namespace semgus {

/// A constraint that is a single application of a relation to the target
/// with literal arguments, e.g. (F.Sem mul 5 3 15).
std::optional<Example> ground_example(const Formula & f, const SynthesisProblem & p);

struct SpecSummary
{
  std::vector<Example> examples;
  std::vector<int> example_of;  // constraint index of each example
  std::vector<int> others;      // constraints that are not ground examples
  bool example_only() const { return others.empty(); }
};

SpecSummary summarize_spec(const SynthesisProblem & p);

/// A constraint instantiated at a binding of its free (declare-var) variables.
struct SpecInstance
{
  int constraint = -1;
  Binding binding;
  bool operator==(const SpecInstance &) const = default;
};

enum class Truth
{
  True,
  False,
  Unknown
};

/// Decide a constraint concretely for `term`. Relation applications on the
/// target are run through the evaluator (a failed or fuel-exhausted run makes
/// the atom false); quantified variables must be determined by such
/// applications, otherwise the result is Unknown.
Truth check_instance(const Evaluator & ev, const ProgramTerm & term,
                     const Formula & constraint, const Binding & binding,
                     const EvalOptions & opts = {});

}  // namespace semgus
