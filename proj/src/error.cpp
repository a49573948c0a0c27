#include "semgus/error.hpp"

namespace semgus {

std::string SourceLoc::str() const
{
  if (!known()) return "?";
  return std::to_string(line) + ":" + std::to_string(col);
}

std::string_view to_string(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::UnbalancedParens: return "UnbalancedParens";
    case ErrorKind::BadToken: return "BadToken";
    case ErrorKind::UnterminatedString: return "UnterminatedString";
    case ErrorKind::UnknownCommand: return "UnknownCommand";
    case ErrorKind::DuplicateDeclaration: return "DuplicateDeclaration";
    case ErrorKind::UnresolvedName: return "UnresolvedName";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::MissingCheckSynth: return "MissingCheckSynth";
    case ErrorKind::AbsentSynthTarget: return "AbsentSynthTarget";
    case ErrorKind::SortMismatch: return "SortMismatch";
    case ErrorKind::UnsupportedArity: return "UnsupportedArity";
    case ErrorKind::BadAnnotation: return "BadAnnotation";
    case ErrorKind::UnsupportedConstruct: return "UnsupportedConstruct";
    case ErrorKind::NonExhaustiveMatch: return "NonExhaustiveMatch";
    case ErrorKind::UnknownConstructor: return "UnknownConstructor";
    case ErrorKind::IllSorted: return "IllSorted";
    case ErrorKind::DuplicateArm: return "DuplicateArm";
    case ErrorKind::NestedQuantifier: return "NestedQuantifier";
    case ErrorKind::EmptySemantics: return "EmptySemantics";
    case ErrorKind::MissingAnnotation: return "MissingAnnotation";
    case ErrorKind::DoubleWrite: return "DoubleWrite";
    case ErrorKind::CyclicDataflow: return "CyclicDataflow";
    case ErrorKind::UngroundedInput: return "UngroundedInput";
    case ErrorKind::UndefinedOutput: return "UndefinedOutput";
    case ErrorKind::NotOperationalizable: return "NotOperationalizable";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::DivByZero: return "DivByZero";
    case ErrorKind::MissingPlan: return "MissingPlan";
    case ErrorKind::IncompleteTerm: return "IncompleteTerm";
    case ErrorKind::UnsupportedSort: return "UnsupportedSort";
    case ErrorKind::SolverCrash: return "SolverCrash";
    case ErrorKind::ModelParseError: return "ModelParseError";
    case ErrorKind::UnsupportedTheory: return "UnsupportedTheory";
    case ErrorKind::HigherOrderConstraint: return "HigherOrderConstraint";
    case ErrorKind::MissingGrammar: return "MissingGrammar";
    case ErrorKind::NotInFragment: return "NotInFragment";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

static std::string compose(ErrorKind kind, const std::string & message,
                           const SourceLoc & loc)
{
  std::string out;
  if (loc.known()) out += loc.str() + ": ";
  out += to_string(kind);
  if (!message.empty()) out += ": " + message;
  return out;
}

Error::Error(ErrorKind kind, std::string message, SourceLoc loc)
    : std::runtime_error(compose(kind, message, loc)),
      kind_(kind),
      loc_(loc),
      detail_(std::move(message))
{
}

}  // namespace semgus
