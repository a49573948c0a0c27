#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "semgus/problem.hpp"

namespace semgus {

/// Immutable, structurally shared program term. A hole is a leaf labeled by a
/// grammar nonterminal index (or -1 when unknown).
class ProgramTerm
{
 public:
  struct Node
  {
    int constructor = -1;  // -1 for a hole
    int nonterminal = -1;  // holes only
    std::vector<ProgramTerm> children;
    uint32_t size = 0;    // nodes, holes excluded
    uint32_t height = 0;  // leaf = 1, hole = 0
    uint32_t holes = 0;
    size_t hash = 0;
  };

  ProgramTerm() = default;
  static ProgramTerm node(int constructor, std::vector<ProgramTerm> children = {});
  static ProgramTerm hole(int nonterminal);

  bool valid() const { return n_ != nullptr; }
  bool is_hole() const { return n_->constructor < 0; }
  int constructor() const { return n_->constructor; }
  int nonterminal() const { return n_->nonterminal; }
  const std::vector<ProgramTerm> & children() const { return n_->children; }
  const ProgramTerm & child(size_t i) const { return n_->children[i]; }
  uint32_t size() const { return n_->size; }
  uint32_t height() const { return n_->height; }
  uint32_t hole_count() const { return n_->holes; }
  bool complete() const { return n_->holes == 0; }
  size_t hash() const { return n_->hash; }
  const Node * raw() const { return n_.get(); }

  /// Replace the leftmost hole.
  ProgramTerm fill_leftmost(const ProgramTerm & replacement) const;

  bool operator==(const ProgramTerm & o) const;

  /// `$x`, `($+ $x $1)`; holes print as `??` or `(?? NT)` given a grammar.
  SExpr to_sexpr(const SynthesisProblem & p, const Grammar * g = nullptr) const;
  std::string str(const SynthesisProblem & p, const Grammar * g = nullptr) const;

 private:
  std::shared_ptr<const Node> n_;
};

struct TermHash
{
  size_t operator()(const ProgramTerm & t) const { return t.hash(); }
};

/// Parse a term of `term_type`. `??` (or `(?? N)`) denotes a hole.
ProgramTerm parse_term(const SExpr & e, const SynthesisProblem & p,
                       const std::string & term_type);

/// Accepts `((define-fun f () T term))`, `(define-fun f () T term)` or a bare
/// term of the target's type.
ProgramTerm parse_solution(std::string_view text, const SynthesisProblem & p);

/// `((define-fun <name> () <Type> <term>))`
std::string format_solution(const ProgramTerm & t, const SynthesisProblem & p);

}  // namespace semgus
