#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "semgus/error.hpp"

namespace semgus {

using BigInt = boost::multiprecision::cpp_int;

class SExpr;

/// Generic SMT-LIB style symbolic expression. Equality is structural and
/// ignores source locations.
class SExpr
{
 public:
  enum class Kind
  {
    Symbol,
    Numeral,
    String,
    BitVec,
    Bool,
    Keyword,
    List
  };

  struct BitVecLit
  {
    uint32_t width;
    BigInt value;
    bool operator==(const BitVecLit &) const = default;
  };

  SExpr() : data_(std::vector<SExpr>{}) {}

  static SExpr symbol(std::string name, SourceLoc loc = {});
  static SExpr numeral(BigInt value, SourceLoc loc = {});
  static SExpr string(std::string value, SourceLoc loc = {});
  static SExpr bitvec(uint32_t width, BigInt value, SourceLoc loc = {});
  static SExpr boolean(bool value, SourceLoc loc = {});
  static SExpr keyword(std::string name, SourceLoc loc = {});
  static SExpr list(std::vector<SExpr> items, SourceLoc loc = {});

  Kind kind() const { return static_cast<Kind>(data_.index()); }
  bool is_symbol() const { return kind() == Kind::Symbol; }
  bool is_symbol(std::string_view name) const;
  bool is_list() const { return kind() == Kind::List; }
  bool is_keyword() const { return kind() == Kind::Keyword; }
  bool is_atom() const { return !is_list(); }

  /// Symbol or keyword name (without the leading ':').
  const std::string & name() const;
  const BigInt & numeral() const;
  const std::string & string_value() const;
  const BitVecLit & bitvec() const;
  bool boolean() const;
  const std::vector<SExpr> & items() const;
  std::vector<SExpr> & items();

  size_t size() const { return items().size(); }
  const SExpr & operator[](size_t i) const { return items()[i]; }
  /// True for a nonempty list whose first item is the given symbol.
  bool has_head(std::string_view head) const;

  const SourceLoc & loc() const { return loc_; }
  void set_loc(SourceLoc loc) { loc_ = loc; }

  bool operator==(const SExpr & other) const { return data_ == other.data_; }

 private:
  struct Sym
  {
    std::string name;
    bool operator==(const Sym &) const = default;
  };
  struct Num
  {
    BigInt value;
    bool operator==(const Num &) const = default;
  };
  struct Str
  {
    std::string value;
    bool operator==(const Str &) const = default;
  };
  struct Boo
  {
    bool value;
    bool operator==(const Boo &) const = default;
  };
  struct Kw
  {
    std::string name;
    bool operator==(const Kw &) const = default;
  };

  std::variant<Sym, Num, Str, BitVecLit, Boo, Kw, std::vector<SExpr>> data_;
  SourceLoc loc_;
};

/// Read every top-level expression of `text`. Throws Error with kind
/// UnbalancedParens, BadToken or UnterminatedString.
std::vector<SExpr> read_sexprs(std::string_view text);

/// Canonical single-space rendering. read_sexprs(print_sexpr(e)) == {e}.
std::string print_sexpr(const SExpr & expr);

/// True if `name` can be printed without |quotes|.
bool is_simple_symbol(std::string_view name);

/// Print a symbol, quoting it when needed.
std::string quote_symbol(std::string_view name);

}  // namespace semgus
