#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace semgus {

/// A position in source text. Line and column are 1-based; 0 means unknown.
struct SourceLoc
{
  uint32_t line = 0;
  uint32_t col = 0;
  uint32_t offset = 0;

  bool known() const { return line != 0; }
  std::string str() const;

  // Locations are annotations: they never take part in structural equality
  // of the objects that carry them.
  bool operator==(const SourceLoc &) const { return true; }
  bool same_position(const SourceLoc & o) const
  {
    return line == o.line && col == o.col && offset == o.offset;
  }
};

enum class ErrorKind
{
  // lexical
  UnbalancedParens,
  BadToken,
  UnterminatedString,
  // problem analysis
  UnknownCommand,
  DuplicateDeclaration,
  UnresolvedName,
  ArityMismatch,
  MissingCheckSynth,
  AbsentSynthTarget,
  SortMismatch,
  UnsupportedArity,
  BadAnnotation,
  UnsupportedConstruct,
  // semantics desugaring
  NonExhaustiveMatch,
  UnknownConstructor,
  IllSorted,
  DuplicateArm,
  NestedQuantifier,
  EmptySemantics,
  // operationalization
  MissingAnnotation,
  DoubleWrite,
  CyclicDataflow,
  UngroundedInput,
  UndefinedOutput,
  NotOperationalizable,
  // evaluation
  UnboundVariable,
  DivByZero,
  MissingPlan,
  IncompleteTerm,
  // verification
  UnsupportedSort,
  SolverCrash,
  ModelParseError,
  // interop
  UnsupportedTheory,
  HigherOrderConstraint,
  MissingGrammar,
  NotInFragment,
  // tooling
  IoError,
};

std::string_view to_string(ErrorKind kind);

/// The single exception type thrown by the library. Carries a machine-readable
/// kind and, where one exists, the location of the offending input.
class Error : public std::runtime_error
{
 public:
  Error(ErrorKind kind, std::string message, SourceLoc loc = {});

  ErrorKind kind() const { return kind_; }
  const SourceLoc & loc() const { return loc_; }
  const std::string & detail() const { return detail_; }

 private:
  ErrorKind kind_;
  SourceLoc loc_;
  std::string detail_;
};

}  // namespace semgus
