#include "semgus/term.hpp"

#include <algorithm>
#include <functional>

namespace semgus {

namespace {

size_t mix(size_t h, size_t v)
{
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

ProgramTerm ProgramTerm::node(int constructor, std::vector<ProgramTerm> children)
{
  auto n = std::make_shared<Node>();
  n->constructor = constructor;
  n->size = 1;
  n->hash = mix(0x51ed27, static_cast<size_t>(constructor));
  uint32_t h = 0;
  for (const auto & c : children) {
    n->size += c.size();
    n->holes += c.hole_count();
    h = std::max(h, c.height());
    n->hash = mix(n->hash, c.hash());
  }
  n->height = h + 1;
  n->children = std::move(children);
  ProgramTerm t;
  t.n_ = std::move(n);
  return t;
}

ProgramTerm ProgramTerm::hole(int nonterminal)
{
  auto n = std::make_shared<Node>();
  n->nonterminal = nonterminal;
  n->holes = 1;
  n->hash = mix(0x401e, static_cast<size_t>(nonterminal + 1));
  ProgramTerm t;
  t.n_ = std::move(n);
  return t;
}

ProgramTerm ProgramTerm::fill_leftmost(const ProgramTerm & r) const
{
  if (is_hole()) return r;
  std::vector<ProgramTerm> kids = children();
  for (auto & k : kids)
    if (k.hole_count() > 0) {
      k = k.fill_leftmost(r);
      return node(constructor(), std::move(kids));
    }
  return *this;
}

bool ProgramTerm::operator==(const ProgramTerm & o) const
{
  if (n_ == o.n_) return true;
  if (!n_ || !o.n_) return false;
  if (n_->hash != o.n_->hash || n_->constructor != o.n_->constructor ||
      n_->nonterminal != o.n_->nonterminal || n_->size != o.n_->size)
    return false;
  return n_->children == o.n_->children;
}

SExpr ProgramTerm::to_sexpr(const SynthesisProblem & p, const Grammar * g) const
{
  if (is_hole()) {
    if (g && nonterminal() >= 0)
      return SExpr::list({SExpr::symbol("??"),
                          SExpr::symbol(g->nonterminals[nonterminal()].name)});
    return SExpr::symbol("??");
  }
  SExpr head = SExpr::symbol(p.constructors[constructor()].name);
  if (children().empty()) return head;
  std::vector<SExpr> items{head};
  for (const auto & c : children()) items.push_back(c.to_sexpr(p, g));
  return SExpr::list(std::move(items));
}

std::string ProgramTerm::str(const SynthesisProblem & p, const Grammar * g) const
{
  return print_sexpr(to_sexpr(p, g));
}

ProgramTerm parse_term(const SExpr & e, const SynthesisProblem & p,
                       const std::string & term_type)
{
  if (e.is_symbol("??") || e.has_head("??")) return ProgramTerm::hole(-1);
  const SExpr & head = e.is_list() && e.size() > 0 ? e[0] : e;
  if (!head.is_symbol())
    throw Error(ErrorKind::UnresolvedName, "expected a constructor", e.loc());
  int c = p.find_constructor(head.name());
  if (c < 0)
    throw Error(ErrorKind::UnresolvedName,
                "unknown constructor '" + head.name() + "'", head.loc());
  const auto & ctor = p.constructors[c];
  if (ctor.term_type != term_type)
    throw Error(ErrorKind::SortMismatch,
                head.name() + " builds " + ctor.term_type + ", expected " + term_type,
                head.loc());
  size_t n = e.is_list() ? e.size() - 1 : 0;
  if (n != ctor.arity())
    throw Error(ErrorKind::ArityMismatch,
                head.name() + " expects " + std::to_string(ctor.arity()) + " children",
                e.loc());
  std::vector<ProgramTerm> kids;
  for (size_t i = 0; i < n; ++i) kids.push_back(parse_term(e[i + 1], p, ctor.children[i]));
  return ProgramTerm::node(c, std::move(kids));
}

ProgramTerm parse_solution(std::string_view text, const SynthesisProblem & p)
{
  auto exprs = read_sexprs(text);
  if (exprs.size() != 1)
    throw Error(ErrorKind::ArityMismatch, "expected exactly one term",
                exprs.empty() ? SourceLoc{} : exprs[1].loc());
  SExpr e = exprs[0];
  if (e.is_list() && e.size() == 1 && e[0].has_head("define-fun")) e = e[0];
  std::string tt = p.target ? p.target->term_type : "";
  if (e.has_head("define-fun")) {
    if (e.size() != 5 || !e[3].is_symbol())
      throw Error(ErrorKind::ArityMismatch, "malformed define-fun", e.loc());
    tt = e[3].name();
    if (p.find_term_type(tt) < 0)
      throw Error(ErrorKind::UnresolvedName, "unknown term type '" + tt + "'", e[3].loc());
    e = e[4];
  }
  return parse_term(e, p, tt);
}

std::string format_solution(const ProgramTerm & t, const SynthesisProblem & p)
{
  std::string name = p.target ? p.target->name : "f";
  std::string tt = p.target ? p.target->term_type : p.constructors[t.constructor()].term_type;
  return "((define-fun " + quote_symbol(name) + " () " + quote_symbol(tt) + " " +
         t.str(p) + "))";
}

}  // namespace semgus
