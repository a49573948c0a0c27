#pragma once

#include <map>
#include <span>
#include <string>
#include <variant>

#include "semgus/sexpr.hpp"
#include "semgus/sort.hpp"

namespace semgus {

struct BitVecValue
{
  uint32_t width = 1;
  BigInt value;  // always in [0, 2^width)
  bool operator==(const BitVecValue &) const = default;
};

/// A concrete runtime value of a value sort.
class Value
{
 public:
  Value() : v_(BigInt(0)) {}
  static Value integer(BigInt v) { return Value(std::move(v)); }
  static Value boolean(bool b) { return Value(b); }
  static Value bitvec(uint32_t width, BigInt v);
  static Value string(std::string s) { return Value(std::move(s)); }
  /// The default value of a sort (0, false, #b0..0, "").
  static Value default_of(const Sort & sort);

  bool is_int() const { return std::holds_alternative<BigInt>(v_); }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_bitvec() const { return std::holds_alternative<BitVecValue>(v_); }
  bool is_string() const { return std::holds_alternative<std::string>(v_); }

  const BigInt & as_int() const;
  bool as_bool() const;
  const BitVecValue & as_bitvec() const;
  const std::string & as_string() const;

  Sort sort() const;

  bool operator==(const Value &) const = default;

  /// Literal as an s-expression (negative integers become Numeral(-n)).
  SExpr to_sexpr() const;
  /// SMT-LIB literal text; negative integers print as (- n).
  std::string smt() const;
  /// Human readable rendering (same as smt()).
  std::string str() const { return smt(); }

 private:
  explicit Value(BigInt v) : v_(std::move(v)) {}
  explicit Value(bool b) : v_(b) {}
  explicit Value(BitVecValue b) : v_(std::move(b)) {}
  explicit Value(std::string s) : v_(std::move(s)) {}

  std::variant<BigInt, bool, BitVecValue, std::string> v_;
};

/// Variable assignment.
using Binding = std::map<std::string, Value>;

/// Convert a literal s-expression (numeral, bool, bitvector, string, or
/// (- n)) to a value. Returns false if `e` is not a literal.
bool literal_value(const SExpr & e, Value & out);

}  // namespace semgus
