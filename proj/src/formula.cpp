#include "semgus/formula.hpp"

#include <array>
#include <unordered_map>

namespace semgus {

namespace {

struct OpInfo
{
  Op op;
  std::string_view name;
};

constexpr std::array kOps = {
    OpInfo{Op::Not, "not"},          OpInfo{Op::And, "and"},
    OpInfo{Op::Or, "or"},            OpInfo{Op::Implies, "=>"},
    OpInfo{Op::Xor, "xor"},          OpInfo{Op::Ite, "ite"},
    OpInfo{Op::Eq, "="},             OpInfo{Op::Distinct, "distinct"},
    OpInfo{Op::Add, "+"},            OpInfo{Op::Sub, "-"},
    OpInfo{Op::Mul, "*"},            OpInfo{Op::Div, "div"},
    OpInfo{Op::Mod, "mod"},          OpInfo{Op::Abs, "abs"},
    OpInfo{Op::Lt, "<"},             OpInfo{Op::Le, "<="},
    OpInfo{Op::Gt, ">"},             OpInfo{Op::Ge, ">="},
    OpInfo{Op::BvAdd, "bvadd"},      OpInfo{Op::BvSub, "bvsub"},
    OpInfo{Op::BvMul, "bvmul"},      OpInfo{Op::BvUdiv, "bvudiv"},
    OpInfo{Op::BvUrem, "bvurem"},    OpInfo{Op::BvAnd, "bvand"},
    OpInfo{Op::BvOr, "bvor"},        OpInfo{Op::BvXor, "bvxor"},
    OpInfo{Op::BvNot, "bvnot"},      OpInfo{Op::BvNeg, "bvneg"},
    OpInfo{Op::BvShl, "bvshl"},      OpInfo{Op::BvLshr, "bvlshr"},
    OpInfo{Op::BvAshr, "bvashr"},    OpInfo{Op::BvUlt, "bvult"},
    OpInfo{Op::BvUle, "bvule"},      OpInfo{Op::BvUgt, "bvugt"},
    OpInfo{Op::BvUge, "bvuge"},      OpInfo{Op::BvSlt, "bvslt"},
    OpInfo{Op::BvSle, "bvsle"},      OpInfo{Op::BvSgt, "bvsgt"},
    OpInfo{Op::BvSge, "bvsge"},      OpInfo{Op::StrConcat, "str.++"},
    OpInfo{Op::StrLen, "str.len"},   OpInfo{Op::StrAt, "str.at"},
    OpInfo{Op::StrContains, "str.contains"},
};

BigInt euclid_mod(const BigInt & m, const BigInt & n)
{
  BigInt r = m % n;  // sign follows m
  if (r < 0) r += abs(n);
  return r;
}

BigInt signed_of(const BitVecValue & b)
{
  if (b.width > 0 && bit_test(b.value, b.width - 1))
    return b.value - (BigInt(1) << b.width);
  return b.value;
}

[[noreturn]] void arity_error(Op op, size_t n)
{
  throw Error(ErrorKind::IllSorted, "operator '" + std::string(op_name(op)) +
                                        "' applied to " + std::to_string(n) +
                                        " arguments");
}

}  // namespace

std::optional<Op> op_from_name(std::string_view name)
{
  static const std::unordered_map<std::string_view, Op> table = [] {
    std::unordered_map<std::string_view, Op> t;
    for (const auto & info : kOps) t.emplace(info.name, info.op);
    return t;
  }();
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

std::string_view op_name(Op op)
{
  for (const auto & info : kOps)
    if (info.op == op) return info.name;
  return "?";
}

Value apply_op(Op op, std::span<const Value> a)
{
  const size_t n = a.size();
  auto bv_fold = [&](auto f) {
    uint32_t w = a[0].as_bitvec().width;
    BigInt acc = a[0].as_bitvec().value;
    for (size_t i = 1; i < n; ++i) acc = f(acc, a[i].as_bitvec().value);
    return Value::bitvec(w, acc);
  };
  switch (op) {
    case Op::Not: return Value::boolean(!a[0].as_bool());
    case Op::And: {
      for (const auto & v : a)
        if (!v.as_bool()) return Value::boolean(false);
      return Value::boolean(true);
    }
    case Op::Or: {
      for (const auto & v : a)
        if (v.as_bool()) return Value::boolean(true);
      return Value::boolean(false);
    }
    case Op::Implies: {
      bool acc = a[n - 1].as_bool();
      for (size_t i = n - 1; i-- > 0;) acc = !a[i].as_bool() || acc;
      return Value::boolean(acc);
    }
    case Op::Xor: return Value::boolean(a[0].as_bool() != a[1].as_bool());
    case Op::Ite: return a[0].as_bool() ? a[1] : a[2];
    case Op::Eq: {
      for (size_t i = 1; i < n; ++i) {
        if (a[i].sort() != a[0].sort())
          throw Error(ErrorKind::SortMismatch, "comparing " + a[0].str() +
                                                   " with " + a[i].str());
        if (!(a[i] == a[0])) return Value::boolean(false);
      }
      return Value::boolean(true);
    }
    case Op::Distinct: {
      for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
          if (a[i] == a[j]) return Value::boolean(false);
      return Value::boolean(true);
    }
    case Op::Add: {
      BigInt acc = a[0].as_int();
      for (size_t i = 1; i < n; ++i) acc += a[i].as_int();
      return Value::integer(std::move(acc));
    }
    case Op::Sub: {
      if (n == 1) return Value::integer(-a[0].as_int());
      BigInt acc = a[0].as_int();
      for (size_t i = 1; i < n; ++i) acc -= a[i].as_int();
      return Value::integer(std::move(acc));
    }
    case Op::Mul: {
      BigInt acc = a[0].as_int();
      for (size_t i = 1; i < n; ++i) acc *= a[i].as_int();
      return Value::integer(std::move(acc));
    }
    case Op::Div:
    case Op::Mod: {
      const BigInt & m = a[0].as_int();
      const BigInt & d = a[1].as_int();
      if (d == 0) throw Error(ErrorKind::DivByZero, "integer division by zero");
      BigInt r = euclid_mod(m, d);
      if (op == Op::Mod) return Value::integer(std::move(r));
      return Value::integer((m - r) / d);
    }
    case Op::Abs: return Value::integer(abs(a[0].as_int()));
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge: {
      for (size_t i = 0; i + 1 < n; ++i) {
        const BigInt & x = a[i].as_int();
        const BigInt & y = a[i + 1].as_int();
        bool ok = op == Op::Lt   ? x < y
                  : op == Op::Le ? x <= y
                  : op == Op::Gt ? x > y
                                 : x >= y;
        if (!ok) return Value::boolean(false);
      }
      return Value::boolean(true);
    }
    case Op::BvAdd: return bv_fold([](const BigInt & x, const BigInt & y) { return BigInt(x + y); });
    case Op::BvSub: return bv_fold([](const BigInt & x, const BigInt & y) { return BigInt(x - y); });
    case Op::BvMul: return bv_fold([](const BigInt & x, const BigInt & y) { return BigInt(x * y); });
    case Op::BvAnd: return bv_fold([](const BigInt & x, const BigInt & y) { return BigInt(x & y); });
    case Op::BvOr: return bv_fold([](const BigInt & x, const BigInt & y) { return BigInt(x | y); });
    case Op::BvXor: return bv_fold([](const BigInt & x, const BigInt & y) { return BigInt(x ^ y); });
    case Op::BvUdiv: {
      const auto & x = a[0].as_bitvec();
      const auto & y = a[1].as_bitvec();
      if (y.value == 0) return Value::bitvec(x.width, (BigInt(1) << x.width) - 1);
      return Value::bitvec(x.width, x.value / y.value);
    }
    case Op::BvUrem: {
      const auto & x = a[0].as_bitvec();
      const auto & y = a[1].as_bitvec();
      if (y.value == 0) return a[0];
      return Value::bitvec(x.width, x.value % y.value);
    }
    case Op::BvNot: {
      const auto & x = a[0].as_bitvec();
      return Value::bitvec(x.width, ((BigInt(1) << x.width) - 1) ^ x.value);
    }
    case Op::BvNeg: {
      const auto & x = a[0].as_bitvec();
      return Value::bitvec(x.width, -x.value);
    }
    case Op::BvShl:
    case Op::BvLshr:
    case Op::BvAshr: {
      const auto & x = a[0].as_bitvec();
      const auto & s = a[1].as_bitvec();
      if (s.value >= x.width) {
        if (op == Op::BvAshr && signed_of(x) < 0)
          return Value::bitvec(x.width, -1);
        return Value::bitvec(x.width, 0);
      }
      unsigned k = static_cast<unsigned>(s.value);
      if (op == Op::BvShl) return Value::bitvec(x.width, x.value << k);
      if (op == Op::BvLshr) return Value::bitvec(x.width, x.value >> k);
      BigInt sv = signed_of(x);
      // arithmetic shift = floor division by 2^k
      BigInt p = BigInt(1) << k;
      BigInt q = sv >= 0 ? BigInt(sv / p) : BigInt(-((-sv + p - 1) / p));
      return Value::bitvec(x.width, q);
    }
    case Op::BvUlt: return Value::boolean(a[0].as_bitvec().value < a[1].as_bitvec().value);
    case Op::BvUle: return Value::boolean(a[0].as_bitvec().value <= a[1].as_bitvec().value);
    case Op::BvUgt: return Value::boolean(a[0].as_bitvec().value > a[1].as_bitvec().value);
    case Op::BvUge: return Value::boolean(a[0].as_bitvec().value >= a[1].as_bitvec().value);
    case Op::BvSlt: return Value::boolean(signed_of(a[0].as_bitvec()) < signed_of(a[1].as_bitvec()));
    case Op::BvSle: return Value::boolean(signed_of(a[0].as_bitvec()) <= signed_of(a[1].as_bitvec()));
    case Op::BvSgt: return Value::boolean(signed_of(a[0].as_bitvec()) > signed_of(a[1].as_bitvec()));
    case Op::BvSge: return Value::boolean(signed_of(a[0].as_bitvec()) >= signed_of(a[1].as_bitvec()));
    case Op::StrConcat: {
      std::string s;
      for (const auto & v : a) s += v.as_string();
      return Value::string(std::move(s));
    }
    case Op::StrLen:
      return Value::integer(static_cast<long long>(a[0].as_string().size()));
    case Op::StrAt: {
      const auto & s = a[0].as_string();
      const BigInt & i = a[1].as_int();
      if (i < 0 || i >= static_cast<long long>(s.size()))
        return Value::string("");
      return Value::string(std::string(1, s[static_cast<size_t>(i)]));
    }
    case Op::StrContains:
      return Value::boolean(a[0].as_string().find(a[1].as_string()) !=
                            std::string::npos);
  }
  throw Error(ErrorKind::UnsupportedConstruct, "unknown operator");
}

// ---------------------------------------------------------------------------
// Formula construction

Formula::Formula() : Formula(literal(Value::boolean(true))) {}

Formula Formula::var(std::string name, SourceLoc loc)
{
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->name = std::move(name);
  n->loc = loc;
  return Formula(std::move(n));
}

Formula Formula::literal(Value v, SourceLoc loc)
{
  auto n = std::make_shared<Node>();
  n->kind = Kind::Literal;
  n->literal = std::move(v);
  n->loc = loc;
  return Formula(std::move(n));
}

Formula Formula::app(Op op, std::vector<Formula> args, SourceLoc loc)
{
  auto n = std::make_shared<Node>();
  n->kind = Kind::App;
  n->op = op;
  n->args = std::move(args);
  n->loc = loc;
  return Formula(std::move(n));
}

Formula Formula::rel_app(std::string relation, std::string term,
                         std::vector<Formula> args, SourceLoc loc)
{
  auto n = std::make_shared<Node>();
  n->kind = Kind::RelApp;
  n->name = std::move(relation);
  n->term = std::move(term);
  n->args = std::move(args);
  n->loc = loc;
  return Formula(std::move(n));
}

Formula Formula::quant(bool forall, std::vector<TypedVar> binders,
                       Formula body, SourceLoc loc)
{
  auto n = std::make_shared<Node>();
  n->kind = Kind::Quant;
  n->forall = forall;
  n->binders = std::move(binders);
  n->args.push_back(std::move(body));
  n->loc = loc;
  return Formula(std::move(n));
}

Formula Formula::conjunction(std::vector<Formula> parts)
{
  if (parts.empty()) return Formula();
  if (parts.size() == 1) return parts.front();
  return app(Op::And, std::move(parts));
}

bool Formula::is_true() const
{
  return kind() == Kind::Literal && literal_value().is_bool() &&
         literal_value().as_bool();
}

bool Formula::operator==(const Formula & other) const
{
  if (n_ == other.n_) return true;
  const Node & a = *n_;
  const Node & b = *other.n_;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::Var: return a.name == b.name;
    case Kind::Literal: return a.literal == b.literal;
    case Kind::App: return a.op == b.op && a.args == b.args;
    case Kind::RelApp:
      return a.name == b.name && a.term == b.term && a.args == b.args;
    case Kind::Quant:
      return a.forall == b.forall && a.binders == b.binders &&
             a.args == b.args;
  }
  return false;
}

static void collect_free(const Formula & f, std::set<std::string> & bound,
                         std::set<std::string> & out)
{
  switch (f.kind()) {
    case Formula::Kind::Var:
      if (!bound.count(f.name())) out.insert(f.name());
      return;
    case Formula::Kind::Literal: return;
    case Formula::Kind::App:
    case Formula::Kind::RelApp:
      for (const auto & a : f.args()) collect_free(a, bound, out);
      return;
    case Formula::Kind::Quant: {
      std::set<std::string> inner = bound;
      for (const auto & b : f.binders()) inner.insert(b.name);
      collect_free(f.body(), inner, out);
      return;
    }
  }
}

std::set<std::string> Formula::free_vars() const
{
  std::set<std::string> bound, out;
  collect_free(*this, bound, out);
  return out;
}

bool Formula::has_rel_app() const
{
  if (kind() == Kind::RelApp) return true;
  for (const auto & a : args())
    if (a.has_rel_app()) return true;
  return false;
}

bool Formula::has_quantifier() const
{
  if (kind() == Kind::Quant) return true;
  for (const auto & a : args())
    if (a.has_quantifier()) return true;
  return false;
}

Formula Formula::substitute(const std::map<std::string, Formula> & sub) const
{
  switch (kind()) {
    case Kind::Var: {
      auto it = sub.find(name());
      return it == sub.end() ? *this : it->second;
    }
    case Kind::Literal: return *this;
    case Kind::App: {
      std::vector<Formula> a;
      for (const auto & x : args()) a.push_back(x.substitute(sub));
      return app(op(), std::move(a), loc());
    }
    case Kind::RelApp: {
      std::vector<Formula> a;
      for (const auto & x : args()) a.push_back(x.substitute(sub));
      return rel_app(name(), term(), std::move(a), loc());
    }
    case Kind::Quant: {
      std::map<std::string, Formula> inner = sub;
      for (const auto & b : binders()) inner.erase(b.name);
      return quant(is_forall(), binders(), body().substitute(inner), loc());
    }
  }
  return *this;
}

SExpr Formula::to_sexpr() const
{
  switch (kind()) {
    case Kind::Var: return SExpr::symbol(name());
    case Kind::Literal: {
      // SMT-LIB has no negative numerals
      const Value & v = literal_value();
      if (v.is_int() && v.as_int() < 0)
        return SExpr::list({SExpr::symbol("-"), SExpr::numeral(-v.as_int())});
      return v.to_sexpr();
    }
    case Kind::App: {
      std::vector<SExpr> items{SExpr::symbol(std::string(op_name(op())))};
      for (const auto & a : args()) items.push_back(a.to_sexpr());
      return SExpr::list(std::move(items));
    }
    case Kind::RelApp: {
      std::vector<SExpr> items{SExpr::symbol(name()), SExpr::symbol(term())};
      for (const auto & a : args()) items.push_back(a.to_sexpr());
      return SExpr::list(std::move(items));
    }
    case Kind::Quant: {
      std::vector<SExpr> bs;
      for (const auto & b : binders())
        bs.push_back(SExpr::list({SExpr::symbol(b.name), b.sort.to_sexpr()}));
      return SExpr::list({SExpr::symbol(is_forall() ? "forall" : "exists"),
                          SExpr::list(std::move(bs)), body().to_sexpr()});
    }
  }
  return SExpr();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class FormulaParser
{
 public:
  explicit FormulaParser(const FormulaScope & scope) : scope_(scope) {}

  Formula parse(const SExpr & e)
  {
    switch (e.kind()) {
      case SExpr::Kind::Symbol: {
        const std::string & n = e.name();
        if (is_bound(n) || (scope_.is_variable && scope_.is_variable(n)))
          return Formula::var(n, e.loc());
        throw Error(ErrorKind::UnresolvedName, "unknown symbol '" + n + "'",
                    e.loc());
      }
      case SExpr::Kind::Keyword:
        throw Error(ErrorKind::BadToken, "unexpected keyword :" + e.name(),
                    e.loc());
      case SExpr::Kind::List: return parse_list(e);
      default: {
        Value v;
        literal_value(e, v);
        return Formula::literal(std::move(v), e.loc());
      }
    }
  }

 private:
  const FormulaScope & scope_;
  std::vector<std::vector<std::string>> bound_;

  bool is_bound(const std::string & n) const
  {
    for (const auto & frame : bound_)
      for (const auto & b : frame)
        if (b == n) return true;
    return false;
  }

  Formula parse_list(const SExpr & e)
  {
    if (e.size() == 0)
      throw Error(ErrorKind::UnsupportedConstruct, "empty application",
                  e.loc());
    const SExpr & head = e[0];
    if (!head.is_symbol())
      throw Error(ErrorKind::UnsupportedConstruct,
                  "application head must be a symbol", head.loc());
    const std::string & h = head.name();
    if (h == "_") {
      // (_ bvN W)
      if (e.size() == 3 && e[1].is_symbol() && e[1].name().rfind("bv", 0) == 0 &&
          e[2].kind() == SExpr::Kind::Numeral) {
        std::string digits = e[1].name().substr(2);
        if (!digits.empty() &&
            digits.find_first_not_of("0123456789") == std::string::npos) {
          uint32_t w = static_cast<uint32_t>(e[2].numeral());
          if (w == 0)
            throw Error(ErrorKind::IllSorted, "zero-width bitvector", e.loc());
          return Formula::literal(Value::bitvec(w, BigInt(digits)), e.loc());
        }
      }
      throw Error(ErrorKind::UnsupportedConstruct, "unsupported indexed term",
                  e.loc());
    }
    if (h == "forall" || h == "exists") {
      if (!scope_.allow_quantifiers)
        throw Error(ErrorKind::NestedQuantifier,
                    "quantifier not allowed here", e.loc());
      if (e.size() != 3 || !e[1].is_list())
        throw Error(ErrorKind::ArityMismatch, "malformed " + h, e.loc());
      std::vector<TypedVar> binders;
      std::vector<std::string> names;
      for (const auto & b : e[1].items()) {
        Sort s;
        if (!b.is_list() || b.size() != 2 || !b[0].is_symbol() ||
            !parse_value_sort(b[1], s))
          throw Error(ErrorKind::SortMismatch, "malformed binder", b.loc());
        binders.push_back({b[0].name(), s});
        names.push_back(b[0].name());
      }
      bound_.push_back(std::move(names));
      Formula body = parse(e[2]);
      bound_.pop_back();
      return Formula::quant(h == "forall", std::move(binders), std::move(body),
                            e.loc());
    }
    if (scope_.is_relation && scope_.is_relation(h)) {
      if (e.size() < 2 || !e[1].is_symbol() ||
          !(scope_.is_term && scope_.is_term(e[1].name())))
        throw Error(ErrorKind::UnresolvedName,
                    "relation '" + h + "' must be applied to a term name",
                    e.size() > 1 ? e[1].loc() : e.loc());
      std::vector<Formula> args;
      for (size_t i = 2; i < e.size(); ++i) args.push_back(parse(e[i]));
      return Formula::rel_app(h, e[1].name(), std::move(args), e.loc());
    }
    auto op = op_from_name(h);
    if (!op) {
      if (h == "let" || h == "match" || h == "!")
        throw Error(ErrorKind::UnsupportedConstruct,
                    "'" + h + "' is not supported in formulas", e.loc());
      throw Error(ErrorKind::UnresolvedName, "unknown function '" + h + "'",
                  head.loc());
    }
    std::vector<Formula> args;
    for (size_t i = 1; i < e.size(); ++i) args.push_back(parse(e[i]));
    return Formula::app(*op, std::move(args), e.loc());
  }
};

}  // namespace

Formula parse_formula(const SExpr & e, const FormulaScope & scope)
{
  return FormulaParser(scope).parse(e);
}

// ---------------------------------------------------------------------------
// Sorting

namespace {

[[noreturn]] void ill_sorted(const Formula & f, const std::string & why)
{
  throw Error(ErrorKind::IllSorted, why + " in " + f.str(), f.loc());
}

Sort sort_of(const Formula & f, const SortEnv & env,
             std::map<std::string, Sort> & bound)
{
  switch (f.kind()) {
    case Formula::Kind::Var: {
      auto it = bound.find(f.name());
      if (it != bound.end()) return it->second;
      auto jt = env.vars.find(f.name());
      if (jt == env.vars.end())
        throw Error(ErrorKind::UnresolvedName,
                    "unbound variable '" + f.name() + "'", f.loc());
      return jt->second;
    }
    case Formula::Kind::Literal: return f.literal_value().sort();
    case Formula::Kind::Quant: {
      std::map<std::string, Sort> inner = bound;
      for (const auto & b : f.binders()) inner[b.name] = b.sort;
      Sort s = sort_of(f.body(), env, inner);
      if (s != Sort::bool_sort()) ill_sorted(f, "quantifier body is not Bool");
      return s;
    }
    case Formula::Kind::RelApp: {
      std::vector<Sort> arg_sorts;
      for (const auto & a : f.args()) arg_sorts.push_back(sort_of(a, env, bound));
      if (env.relation_params) {
        auto params = env.relation_params(f.name());
        if (!params)
          throw Error(ErrorKind::UnresolvedName,
                      "unknown relation '" + f.name() + "'", f.loc());
        if (params->size() != arg_sorts.size())
          throw Error(ErrorKind::ArityMismatch,
                      "relation '" + f.name() + "' expects " +
                          std::to_string(params->size()) + " value arguments",
                      f.loc());
        for (size_t i = 0; i < arg_sorts.size(); ++i)
          if ((*params)[i] != arg_sorts[i])
            ill_sorted(f, "argument " + std::to_string(i + 1) + " of " +
                              f.name() + " has sort " + arg_sorts[i].str() +
                              ", expected " + (*params)[i].str());
      }
      return Sort::bool_sort();
    }
    case Formula::Kind::App: break;
  }

  std::vector<Sort> s;
  for (const auto & a : f.args()) s.push_back(sort_of(a, env, bound));
  const size_t n = s.size();
  const Op op = f.op();
  auto all_are = [&](const Sort & want) {
    for (const auto & x : s)
      if (x != want) return false;
    return true;
  };
  auto need = [&](bool ok, const char * why) {
    if (!ok) ill_sorted(f, why);
  };
  const Sort B = Sort::bool_sort();
  const Sort I = Sort::int_sort();
  const Sort S = Sort::string_sort();
  switch (op) {
    case Op::Not: need(n == 1 && all_are(B), "'not' expects one Bool"); return B;
    case Op::And:
    case Op::Or: need(all_are(B), "expected Bool arguments"); return B;
    case Op::Implies: need(n >= 2 && all_are(B), "'=>' expects Bool arguments"); return B;
    case Op::Xor: need(n == 2 && all_are(B), "'xor' expects two Bool"); return B;
    case Op::Ite:
      need(n == 3 && s[0] == B && s[1] == s[2], "ill-sorted 'ite'");
      return s[1];
    case Op::Eq:
    case Op::Distinct:
      need(n >= 2 && all_are(s[0]), "comparison of different sorts");
      return B;
    case Op::Add:
    case Op::Mul: need(n >= 1 && all_are(I), "expected Int arguments"); return I;
    case Op::Sub: need(n >= 1 && all_are(I), "expected Int arguments"); return I;
    case Op::Div:
    case Op::Mod: need(n == 2 && all_are(I), "expected two Int arguments"); return I;
    case Op::Abs: need(n == 1 && all_are(I), "expected one Int"); return I;
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge: need(n >= 2 && all_are(I), "expected Int arguments"); return B;
    case Op::BvAdd:
    case Op::BvSub:
    case Op::BvMul:
    case Op::BvAnd:
    case Op::BvOr:
    case Op::BvXor:
      need(n >= 2 && s[0].kind == Sort::Kind::BitVec && all_are(s[0]),
           "expected bitvectors of equal width");
      return s[0];
    case Op::BvUdiv:
    case Op::BvUrem:
    case Op::BvShl:
    case Op::BvLshr:
    case Op::BvAshr:
      need(n == 2 && s[0].kind == Sort::Kind::BitVec && all_are(s[0]),
           "expected two bitvectors of equal width");
      return s[0];
    case Op::BvNot:
    case Op::BvNeg:
      need(n == 1 && s[0].kind == Sort::Kind::BitVec, "expected a bitvector");
      return s[0];
    case Op::BvUlt:
    case Op::BvUle:
    case Op::BvUgt:
    case Op::BvUge:
    case Op::BvSlt:
    case Op::BvSle:
    case Op::BvSgt:
    case Op::BvSge:
      need(n == 2 && s[0].kind == Sort::Kind::BitVec && all_are(s[0]),
           "expected two bitvectors of equal width");
      return B;
    case Op::StrConcat: need(n >= 2 && all_are(S), "expected Strings"); return S;
    case Op::StrLen: need(n == 1 && s[0] == S, "expected a String"); return I;
    case Op::StrAt: need(n == 2 && s[0] == S && s[1] == I, "expected String, Int"); return S;
    case Op::StrContains: need(n == 2 && all_are(S), "expected two Strings"); return B;
  }
  arity_error(op, n);
}

}  // namespace

Sort formula_sort(const Formula & f, const SortEnv & env)
{
  std::map<std::string, Sort> bound;
  return sort_of(f, env, bound);
}

// ---------------------------------------------------------------------------
// Evaluation

Value eval_formula(const Formula & f, const Binding & env,
                   const RelationOracle & rel)
{
  switch (f.kind()) {
    case Formula::Kind::Var: {
      auto it = env.find(f.name());
      if (it == env.end())
        throw Error(ErrorKind::UnboundVariable,
                    "variable '" + f.name() + "' has no value", f.loc());
      return it->second;
    }
    case Formula::Kind::Literal: return f.literal_value();
    case Formula::Kind::RelApp:
      if (!rel)
        throw Error(ErrorKind::UnsupportedConstruct,
                    "relation application cannot be evaluated here", f.loc());
      return Value::boolean(rel(f, env));
    case Formula::Kind::Quant:
      throw Error(ErrorKind::UnsupportedConstruct,
                  "quantifiers cannot be evaluated concretely", f.loc());
    case Formula::Kind::App: break;
  }
  const auto & args = f.args();
  switch (f.op()) {
    case Op::And:
      for (const auto & a : args)
        if (!eval_formula(a, env, rel).as_bool()) return Value::boolean(false);
      return Value::boolean(true);
    case Op::Or:
      for (const auto & a : args)
        if (eval_formula(a, env, rel).as_bool()) return Value::boolean(true);
      return Value::boolean(false);
    case Op::Ite:
      return eval_formula(args[0], env, rel).as_bool()
                 ? eval_formula(args[1], env, rel)
                 : eval_formula(args[2], env, rel);
    default: break;
  }
  std::vector<Value> vals;
  vals.reserve(args.size());
  for (const auto & a : args) vals.push_back(eval_formula(a, env, rel));
  return apply_op(f.op(), vals);
}

}  // namespace semgus
