#include "semgus/sort.hpp"

namespace semgus {

std::string Sort::str() const
{
  switch (kind) {
    case Kind::Int: return "Int";
    case Kind::Bool: return "Bool";
    case Kind::String: return "String";
    case Kind::BitVec: return "(_ BitVec " + std::to_string(width) + ")";
    case Kind::Term: return term_type;
  }
  return "?";
}

SExpr Sort::to_sexpr() const
{
  if (kind == Kind::BitVec)
    return SExpr::list({SExpr::symbol("_"), SExpr::symbol("BitVec"),
                        SExpr::numeral(width)});
  return SExpr::symbol(str());
}

bool parse_value_sort(const SExpr & e, Sort & out)
{
  if (e.is_symbol("Int")) {
    out = Sort::int_sort();
    return true;
  }
  if (e.is_symbol("Bool")) {
    out = Sort::bool_sort();
    return true;
  }
  if (e.is_symbol("String")) {
    out = Sort::string_sort();
    return true;
  }
  if (e.is_list() && e.size() == 3 && e[0].is_symbol("_") &&
      e[1].is_symbol("BitVec") && e[2].kind() == SExpr::Kind::Numeral) {
    const BigInt & w = e[2].numeral();
    if (w <= 0 || w > 65536)
      throw Error(ErrorKind::SortMismatch, "bitvector width must be positive",
                  e.loc());
    out = Sort::bitvec(static_cast<uint32_t>(w));
    return true;
  }
  return false;
}

}  // namespace semgus
