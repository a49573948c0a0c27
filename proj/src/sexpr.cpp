#include "semgus/sexpr.hpp"

#include <cctype>
#include <sstream>

namespace semgus {

SExpr SExpr::symbol(std::string name, SourceLoc loc)
{
  SExpr e;
  e.data_ = Sym{std::move(name)};
  e.loc_ = loc;
  return e;
}

SExpr SExpr::numeral(BigInt value, SourceLoc loc)
{
  SExpr e;
  e.data_ = Num{std::move(value)};
  e.loc_ = loc;
  return e;
}

SExpr SExpr::string(std::string value, SourceLoc loc)
{
  SExpr e;
  e.data_ = Str{std::move(value)};
  e.loc_ = loc;
  return e;
}

SExpr SExpr::bitvec(uint32_t width, BigInt value, SourceLoc loc)
{
  SExpr e;
  e.data_ = BitVecLit{width, std::move(value)};
  e.loc_ = loc;
  return e;
}

SExpr SExpr::boolean(bool value, SourceLoc loc)
{
  SExpr e;
  e.data_ = Boo{value};
  e.loc_ = loc;
  return e;
}

SExpr SExpr::keyword(std::string name, SourceLoc loc)
{
  SExpr e;
  e.data_ = Kw{std::move(name)};
  e.loc_ = loc;
  return e;
}

SExpr SExpr::list(std::vector<SExpr> items, SourceLoc loc)
{
  SExpr e;
  e.data_ = std::move(items);
  e.loc_ = loc;
  return e;
}

bool SExpr::is_symbol(std::string_view name) const
{
  return is_symbol() && std::get<Sym>(data_).name == name;
}

const std::string & SExpr::name() const
{
  if (auto s = std::get_if<Sym>(&data_)) return s->name;
  if (auto k = std::get_if<Kw>(&data_)) return k->name;
  throw Error(ErrorKind::BadToken, "expected a symbol", loc_);
}

const BigInt & SExpr::numeral() const
{
  if (auto n = std::get_if<Num>(&data_)) return n->value;
  throw Error(ErrorKind::BadToken, "expected a numeral", loc_);
}

const std::string & SExpr::string_value() const
{
  if (auto s = std::get_if<Str>(&data_)) return s->value;
  throw Error(ErrorKind::BadToken, "expected a string literal", loc_);
}

const SExpr::BitVecLit & SExpr::bitvec() const
{
  if (auto b = std::get_if<BitVecLit>(&data_)) return *b;
  throw Error(ErrorKind::BadToken, "expected a bitvector literal", loc_);
}

bool SExpr::boolean() const
{
  if (auto b = std::get_if<Boo>(&data_)) return b->value;
  throw Error(ErrorKind::BadToken, "expected a Boolean literal", loc_);
}

const std::vector<SExpr> & SExpr::items() const
{
  if (auto l = std::get_if<std::vector<SExpr>>(&data_)) return *l;
  throw Error(ErrorKind::BadToken, "expected a list", loc_);
}

std::vector<SExpr> & SExpr::items()
{
  if (auto l = std::get_if<std::vector<SExpr>>(&data_)) return *l;
  throw Error(ErrorKind::BadToken, "expected a list", loc_);
}

bool SExpr::has_head(std::string_view head) const
{
  return is_list() && !items().empty() && items()[0].is_symbol(head);
}

// ---------------------------------------------------------------------------
// Reader

namespace {

bool is_symbol_char(char c)
{
  if (std::isalnum(static_cast<unsigned char>(c))) return true;
  switch (c) {
    case '~': case '!': case '@': case '$': case '%': case '^': case '&':
    case '*': case '_': case '-': case '+': case '=': case '<': case '>':
    case '.': case '?': case '/':
      return true;
    default:
      return false;
  }
}

bool is_numeral_token(std::string_view tok)
{
  size_t i = 0;
  if (!tok.empty() && tok[0] == '-') i = 1;
  if (i >= tok.size()) return false;
  for (; i < tok.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(tok[i]))) return false;
  return true;
}

class Reader
{
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all()
  {
    std::vector<SExpr> out;
    while (true) {
      skip_space();
      if (at_end()) break;
      out.push_back(read_one());
    }
    return out;
  }

 private:
  std::string_view text_;
  size_t pos_ = 0;
  uint32_t line_ = 1;
  uint32_t col_ = 1;

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  SourceLoc here() const
  {
    return SourceLoc{line_, col_, static_cast<uint32_t>(pos_)};
  }

  void advance()
  {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space()
  {
    while (!at_end()) {
      char c = peek();
      if (c == ';') {
        while (!at_end() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read_one()
  {
    SourceLoc start = here();
    char c = peek();
    if (c == '(') {
      advance();
      std::vector<SExpr> items;
      while (true) {
        skip_space();
        if (at_end())
          throw Error(ErrorKind::UnbalancedParens,
                      "end of input inside list opened at " + start.str(),
                      here());
        if (peek() == ')') {
          advance();
          return SExpr::list(std::move(items), start);
        }
        items.push_back(read_one());
      }
    }
    if (c == ')')
      throw Error(ErrorKind::UnbalancedParens, "unexpected ')'", start);
    if (c == '"') return read_string(start);
    if (c == '|') return read_quoted_symbol(start);
    if (c == '#') return read_bitvec(start);
    if (c == ':') {
      advance();
      std::string name = read_token_chars();
      if (name.empty())
        throw Error(ErrorKind::BadToken, "empty keyword", start);
      return SExpr::keyword(std::move(name), start);
    }
    std::string tok = read_token_chars();
    if (tok.empty())
      throw Error(ErrorKind::BadToken,
                  std::string("unexpected character '") + c + "'", start);
    if (!at_end() && !delimiter(peek()))
      throw Error(ErrorKind::BadToken,
                  std::string("unexpected character '") + peek() + "'",
                  here());
    if (is_numeral_token(tok)) return SExpr::numeral(BigInt(tok), start);
    if (tok == "true") return SExpr::boolean(true, start);
    if (tok == "false") return SExpr::boolean(false, start);
    return SExpr::symbol(std::move(tok), start);
  }

  static bool delimiter(char c)
  {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' ||
           c == ')' || c == ';' || c == '"';
  }

  std::string read_token_chars()
  {
    std::string tok;
    while (!at_end() && is_symbol_char(peek())) {
      tok.push_back(peek());
      advance();
    }
    return tok;
  }

  SExpr read_string(SourceLoc start)
  {
    advance();  // opening quote
    std::string value;
    while (true) {
      if (at_end())
        throw Error(ErrorKind::UnterminatedString,
                    "string literal is not terminated", start);
      char c = peek();
      advance();
      if (c == '"') {
        if (!at_end() && peek() == '"') {
          value.push_back('"');
          advance();
          continue;
        }
        return SExpr::string(std::move(value), start);
      }
      value.push_back(c);
    }
  }

  SExpr read_quoted_symbol(SourceLoc start)
  {
    advance();
    std::string value;
    while (true) {
      if (at_end())
        throw Error(ErrorKind::UnterminatedString,
                    "quoted symbol is not terminated", start);
      char c = peek();
      advance();
      if (c == '|') break;
      if (c == '\\')
        throw Error(ErrorKind::BadToken, "'\\' inside quoted symbol", start);
      value.push_back(c);
    }
    if (value.empty())
      throw Error(ErrorKind::BadToken, "empty quoted symbol", start);
    return SExpr::symbol(std::move(value), start);
  }

  SExpr read_bitvec(SourceLoc start)
  {
    advance();  // '#'
    if (at_end() || (peek() != 'x' && peek() != 'b'))
      throw Error(ErrorKind::BadToken, "expected #x or #b literal", start);
    bool hex = peek() == 'x';
    advance();
    std::string digits;
    while (!at_end() && std::isalnum(static_cast<unsigned char>(peek()))) {
      digits.push_back(peek());
      advance();
    }
    if (digits.empty())
      throw Error(ErrorKind::BadToken, "bitvector literal without digits",
                  start);
    BigInt value = 0;
    for (char d : digits) {
      int v;
      if (hex) {
        if (!std::isxdigit(static_cast<unsigned char>(d)))
          throw Error(ErrorKind::BadToken, "bad hex digit in literal", start);
        v = std::isdigit(static_cast<unsigned char>(d))
                ? d - '0'
                : std::tolower(static_cast<unsigned char>(d)) - 'a' + 10;
        value = value * 16 + v;
      } else {
        if (d != '0' && d != '1')
          throw Error(ErrorKind::BadToken, "bad binary digit in literal",
                      start);
        value = value * 2 + (d - '0');
      }
    }
    uint32_t width = static_cast<uint32_t>(digits.size() * (hex ? 4 : 1));
    if (!at_end() && !delimiter(peek()))
      throw Error(ErrorKind::BadToken, "malformed bitvector literal", here());
    return SExpr::bitvec(width, std::move(value), start);
  }
};

void print_into(std::string & out, const SExpr & e)
{
  switch (e.kind()) {
    case SExpr::Kind::Symbol:
      out += quote_symbol(e.name());
      break;
    case SExpr::Kind::Numeral:
      out += e.numeral().str();
      break;
    case SExpr::Kind::String: {
      out.push_back('"');
      for (char c : e.string_value()) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
      }
      out.push_back('"');
      break;
    }
    case SExpr::Kind::BitVec: {
      const auto & bv = e.bitvec();
      if (bv.width % 4 == 0) {
        out += "#x";
        for (int64_t i = bv.width / 4 - 1; i >= 0; --i) {
          int d = static_cast<int>((bv.value >> (4 * i)) & 0xF);
          out.push_back("0123456789ABCDEF"[d]);
        }
      } else {
        out += "#b";
        for (int64_t i = bv.width - 1; i >= 0; --i)
          out.push_back(bit_test(bv.value, static_cast<unsigned>(i)) ? '1'
                                                                     : '0');
      }
      break;
    }
    case SExpr::Kind::Bool:
      out += e.boolean() ? "true" : "false";
      break;
    case SExpr::Kind::Keyword:
      out.push_back(':');
      out += e.name();
      break;
    case SExpr::Kind::List: {
      out.push_back('(');
      bool first = true;
      for (const auto & item : e.items()) {
        if (!first) out.push_back(' ');
        first = false;
        print_into(out, item);
      }
      out.push_back(')');
      break;
    }
  }
}

}  // namespace

std::vector<SExpr> read_sexprs(std::string_view text)
{
  return Reader(text).read_all();
}

bool is_simple_symbol(std::string_view name)
{
  if (name.empty()) return false;
  if (std::isdigit(static_cast<unsigned char>(name[0]))) return false;
  for (char c : name)
    if (!is_symbol_char(c)) return false;
  if (name == "true" || name == "false") return false;
  if (is_numeral_token(name)) return false;
  return true;
}

std::string quote_symbol(std::string_view name)
{
  if (is_simple_symbol(name)) return std::string(name);
  return "|" + std::string(name) + "|";
}

std::string print_sexpr(const SExpr & expr)
{
  std::string out;
  print_into(out, expr);
  return out;
}

}  // namespace semgus
