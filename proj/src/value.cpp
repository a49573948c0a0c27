#include "semgus/value.hpp"

namespace semgus {

Value Value::bitvec(uint32_t width, BigInt v)
{
  BigInt mod = BigInt(1) << width;
  v %= mod;
  if (v < 0) v += mod;
  return Value(BitVecValue{width, std::move(v)});
}

Value Value::default_of(const Sort & sort)
{
  switch (sort.kind) {
    case Sort::Kind::Int: return integer(0);
    case Sort::Kind::Bool: return boolean(false);
    case Sort::Kind::BitVec: return bitvec(sort.width, 0);
    case Sort::Kind::String: return string("");
    case Sort::Kind::Term: break;
  }
  throw Error(ErrorKind::UnsupportedSort, "no value of sort " + sort.str());
}

const BigInt & Value::as_int() const
{
  if (auto p = std::get_if<BigInt>(&v_)) return *p;
  throw Error(ErrorKind::SortMismatch, "expected Int value, got " + str());
}

bool Value::as_bool() const
{
  if (auto p = std::get_if<bool>(&v_)) return *p;
  throw Error(ErrorKind::SortMismatch, "expected Bool value, got " + str());
}

const BitVecValue & Value::as_bitvec() const
{
  if (auto p = std::get_if<BitVecValue>(&v_)) return *p;
  throw Error(ErrorKind::SortMismatch, "expected BitVec value, got " + str());
}

const std::string & Value::as_string() const
{
  if (auto p = std::get_if<std::string>(&v_)) return *p;
  throw Error(ErrorKind::SortMismatch, "expected String value, got " + str());
}

Sort Value::sort() const
{
  if (is_int()) return Sort::int_sort();
  if (is_bool()) return Sort::bool_sort();
  if (is_bitvec()) return Sort::bitvec(as_bitvec().width);
  return Sort::string_sort();
}

SExpr Value::to_sexpr() const
{
  if (is_int()) return SExpr::numeral(as_int());
  if (is_bool()) return SExpr::boolean(as_bool());
  if (is_bitvec())
    return SExpr::bitvec(as_bitvec().width, as_bitvec().value);
  return SExpr::string(as_string());
}

std::string Value::smt() const
{
  if (is_int() && as_int() < 0) {
    BigInt n = -as_int();
    return "(- " + n.str() + ")";
  }
  return print_sexpr(to_sexpr());
}

bool literal_value(const SExpr & e, Value & out)
{
  switch (e.kind()) {
    case SExpr::Kind::Numeral:
      out = Value::integer(e.numeral());
      return true;
    case SExpr::Kind::Bool:
      out = Value::boolean(e.boolean());
      return true;
    case SExpr::Kind::BitVec:
      out = Value::bitvec(e.bitvec().width, e.bitvec().value);
      return true;
    case SExpr::Kind::String:
      out = Value::string(e.string_value());
      return true;
    case SExpr::Kind::List:
      if (e.size() == 2 && e[0].is_symbol("-") &&
          e[1].kind() == SExpr::Kind::Numeral) {
        out = Value::integer(-e[1].numeral());
        return true;
      }
      return false;
    default:
      return false;
  }
}

}  // namespace semgus
