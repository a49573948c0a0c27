#pragma once

#include <cstdint>
#include <string>

#include "semgus/sexpr.hpp"

namespace semgus {

/// Sorts of relation parameters and formula terms. Term sorts name a
/// user-declared term type.
struct Sort
{
  enum class Kind
  {
    Int,
    Bool,
    BitVec,
    String,
    Term
  };

  Kind kind = Kind::Int;
  uint32_t width = 0;
  std::string term_type;

  static Sort int_sort() { return {Kind::Int, 0, {}}; }
  static Sort bool_sort() { return {Kind::Bool, 0, {}}; }
  static Sort string_sort() { return {Kind::String, 0, {}}; }
  static Sort bitvec(uint32_t width) { return {Kind::BitVec, width, {}}; }
  static Sort term(std::string name) { return {Kind::Term, 0, std::move(name)}; }

  bool is_term() const { return kind == Kind::Term; }
  bool is_value() const { return kind != Kind::Term; }

  bool operator==(const Sort &) const = default;

  /// SMT-LIB rendering: Int, Bool, String, (_ BitVec w), or the term type name.
  std::string str() const;
  SExpr to_sexpr() const;
};

/// Parse a value sort (Int/Bool/String/(_ BitVec n)). Returns false if `e`
/// is not one of them.
bool parse_value_sort(const SExpr & e, Sort & out);

struct TypedVar
{
  std::string name;
  Sort sort;
  bool operator==(const TypedVar &) const = default;
};

}  // namespace semgus
