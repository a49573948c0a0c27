#include "semgus/evaluator.hpp"

#include <map>

namespace semgus {

std::string_view to_string(EvalOutcome::Status s)
{
  switch (s) {
    case EvalOutcome::Status::Ok: return "Ok";
    case EvalOutcome::Status::FuelExhausted: return "FuelExhausted";
    case EvalOutcome::Status::GuardFailure: return "GuardFailure";
    case EvalOutcome::Status::NondetAmbiguity: return "NondetAmbiguity";
  }
  return "?";
}

namespace {

struct CExpr
{
  enum class K
  {
    Slot,
    Const,
    App
  };
  K k = K::Const;
  int slot = -1;
  Value c;
  Op op = Op::And;
  std::vector<CExpr> kids;
};

struct CInstr
{
  Instruction::Kind kind = Instruction::Kind::Guard;
  int child = -1;
  int callee = -1;
  std::vector<int> in, out;
  CExpr e;
  int target = -1;
};

struct CPlan
{
  std::vector<CInstr> ins;
  size_t prefix = 0;  // instructions run before committing
  bool tail = false;  // last instruction is a tail call
  int chc = -1;
  std::vector<std::string> names;  // slot -> variable
};

struct CGroup
{
  bool present = false;
  std::vector<CPlan> alts;
  size_t frame = 0;
};

}  // namespace

struct Evaluator::Compiled
{
  std::vector<std::vector<CGroup>> groups;  // [relation][constructor]
  std::vector<size_t> nin, nout;
  std::vector<std::vector<size_t>> in_pos, out_pos;  // value-arg positions
  std::vector<std::vector<std::string>> in_names, out_names;
};

namespace {

class PlanCompiler
{
 public:
  PlanCompiler(const SynthesisProblem & p, const EvaluationPlan & plan) : p_(p)
  {
    for (const auto & v : plan.inputs) slot(v);
    for (const auto & v : plan.outputs) slot(v);
    out_.chc = plan.chc;
    for (const auto & i : plan.instructions) out_.ins.push_back(instr(i));
    out_.prefix = out_.ins.size();
    if (!plan.instructions.empty()) {
      const auto & last = plan.instructions.back();
      if (last.kind == Instruction::Kind::Invoke && last.out_vars == plan.outputs) {
        const auto & callee = p.relations[p.find_relation(last.relation)];
        if (callee.inputs.size() == plan.inputs.size()) {
          out_.tail = true;
          out_.prefix = out_.ins.size() - 1;
        }
      }
    }
  }

  CPlan take() { return std::move(out_); }

 private:
  const SynthesisProblem & p_;
  CPlan out_;
  std::map<std::string, int> slots_;

  int slot(const std::string & v)
  {
    auto [it, fresh] = slots_.emplace(v, static_cast<int>(out_.names.size()));
    if (fresh) out_.names.push_back(v);
    return it->second;
  }

  CExpr expr(const Formula & f)
  {
    CExpr e;
    switch (f.kind()) {
      case Formula::Kind::Var:
        e.k = CExpr::K::Slot;
        e.slot = slot(f.name());
        return e;
      case Formula::Kind::Literal:
        e.k = CExpr::K::Const;
        e.c = f.literal_value();
        return e;
      case Formula::Kind::App:
        e.k = CExpr::K::App;
        e.op = f.op();
        for (const auto & a : f.args()) e.kids.push_back(expr(a));
        return e;
      default:
        throw Error(ErrorKind::UnsupportedConstruct,
                    "plans cannot contain " + f.str(), f.loc());
    }
  }

  CInstr instr(const Instruction & i)
  {
    CInstr c;
    c.kind = i.kind;
    switch (i.kind) {
      case Instruction::Kind::Invoke:
        c.child = i.child;
        c.callee = p_.find_relation(i.relation);
        for (const auto & v : i.in_vars) c.in.push_back(slot(v));
        for (const auto & v : i.out_vars) c.out.push_back(slot(v));
        break;
      case Instruction::Kind::Guard: c.e = expr(i.formula); break;
      case Instruction::Kind::Compute:
        c.e = expr(i.formula);
        c.target = slot(i.target);
        break;
    }
    return c;
  }
};

using Node = ProgramTerm::Node;

class Machine
{
 public:
  enum class St
  {
    Ok,
    Fuel,
    Fail,
    Ambig
  };

  Machine(const Evaluator::Compiled & c, const SynthesisProblem & p, const EvalOptions & o)
      : c_(c), p_(p), o_(o), fuel_(o.fuel)
  {
    arena.reserve(256);
  }

  std::vector<Value> arena;
  std::vector<int> ambiguous;
  uint64_t steps = 0;

  const CGroup & group(const Node * n, int rel) const
  {
    if (n->constructor < 0)
      throw Error(ErrorKind::IncompleteTerm, "cannot evaluate a term with holes");
    const CGroup & g = c_.groups[rel][n->constructor];
    if (!g.present)
      throw Error(ErrorKind::MissingPlan,
                  "no executable semantics for " + p_.relations[rel].name + " on " +
                      p_.constructors[n->constructor].name);
    return g;
  }

  St call(const Node * node, int rel, size_t base, uint32_t depth)
  {
    for (;;) {
      const CGroup & g = group(node, rel);
      if (arena.size() < base + g.frame) arena.resize(base + g.frame);
      int chosen = -1;
      if (o_.mode == EvalMode::FirstMatch) {
        for (size_t a = 0; a < g.alts.size(); ++a) {
          St st = run(g.alts[a], 0, g.alts[a].prefix, node, base, depth);
          if (st == St::Ok) {
            chosen = static_cast<int>(a);
            break;
          }
          if (st != St::Fail) return st;
        }
      } else {
        std::vector<Value> keep;
        std::vector<int> winners;
        for (size_t a = 0; a < g.alts.size(); ++a) {
          St st = run(g.alts[a], 0, g.alts[a].prefix, node, base, depth);
          if (st == St::Ok) {
            if (chosen < 0) {
              chosen = static_cast<int>(a);
              keep.assign(arena.begin() + base, arena.begin() + base + g.frame);
            }
            winners.push_back(g.alts[a].chc);
          } else if (st != St::Fail) {
            return st;
          }
        }
        if (winners.size() > 1) {
          ambiguous = std::move(winners);
          return St::Ambig;
        }
        if (chosen >= 0)
          std::move(keep.begin(), keep.end(), arena.begin() + base);
      }
      if (chosen < 0) return St::Fail;

      const CPlan & plan = g.alts[chosen];
      if (!plan.tail) return St::Ok;
      // tail call: rebind the inputs in place and loop
      if (fuel_ == 0) return St::Fuel;
      --fuel_;
      ++steps;
      const CInstr & t = plan.ins.back();
      std::vector<Value> next;
      next.reserve(t.in.size());
      for (int s : t.in) next.push_back(arena[base + s]);
      for (size_t k = 0; k < next.size(); ++k) arena[base + k] = std::move(next[k]);
      if (t.child >= 0) node = node->children[t.child].raw();
      rel = t.callee;
    }
  }

  St run(const CPlan & plan, size_t from, size_t to, const Node * node, size_t base,
         uint32_t depth)
  {
    for (size_t i = from; i < to; ++i) {
      if (fuel_ == 0) return St::Fuel;
      --fuel_;
      ++steps;
      const CInstr & ins = plan.ins[i];
      switch (ins.kind) {
        case Instruction::Kind::Guard:
          if (!eval(ins.e, base).as_bool()) return St::Fail;
          break;
        case Instruction::Kind::Compute: {
          Value v = eval(ins.e, base);
          arena[base + ins.target] = std::move(v);
          break;
        }
        case Instruction::Kind::Invoke: {
          if (depth + 1 > o_.max_depth) return St::Fuel;
          const Node * child = ins.child < 0 ? node : node->children[ins.child].raw();
          size_t nin = c_.nin[ins.callee];
          size_t cb = arena.size();
          arena.resize(cb + nin + c_.nout[ins.callee]);
          for (size_t k = 0; k < nin; ++k) arena[cb + k] = arena[base + ins.in[k]];
          St st = call(child, ins.callee, cb, depth + 1);
          if (st != St::Ok) {
            arena.resize(cb);
            return st;
          }
          for (size_t k = 0; k < ins.out.size(); ++k)
            arena[base + ins.out[k]] = std::move(arena[cb + nin + k]);
          arena.resize(cb);
          break;
        }
      }
    }
    return St::Ok;
  }

  Value eval(const CExpr & e, size_t base) const
  {
    switch (e.k) {
      case CExpr::K::Slot: return arena[base + e.slot];
      case CExpr::K::Const: return e.c;
      case CExpr::K::App: break;
    }
    switch (e.op) {
      case Op::And:
        for (const auto & k : e.kids)
          if (!eval(k, base).as_bool()) return Value::boolean(false);
        return Value::boolean(true);
      case Op::Or:
        for (const auto & k : e.kids)
          if (eval(k, base).as_bool()) return Value::boolean(true);
        return Value::boolean(false);
      case Op::Ite:
        return eval(e.kids[0], base).as_bool() ? eval(e.kids[1], base)
                                                : eval(e.kids[2], base);
      default: break;
    }
    if (e.kids.size() <= 4) {
      Value buf[4];
      for (size_t i = 0; i < e.kids.size(); ++i) buf[i] = eval(e.kids[i], base);
      return apply_op(e.op, std::span<const Value>(buf, e.kids.size()));
    }
    std::vector<Value> args;
    for (const auto & k : e.kids) args.push_back(eval(k, base));
    return apply_op(e.op, args);
  }

 private:
  const Evaluator::Compiled & c_;
  const SynthesisProblem & p_;
  const EvalOptions & o_;
  uint64_t fuel_;
};

EvalOutcome::Status status_of(Machine::St st)
{
  switch (st) {
    case Machine::St::Ok: return EvalOutcome::Status::Ok;
    case Machine::St::Fuel: return EvalOutcome::Status::FuelExhausted;
    case Machine::St::Fail: return EvalOutcome::Status::GuardFailure;
    case Machine::St::Ambig: return EvalOutcome::Status::NondetAmbiguity;
  }
  return EvalOutcome::Status::GuardFailure;
}

}  // namespace

Evaluator::Evaluator(const SynthesisProblem & p, const PlanTable & plans)
    : problem_(p), c_(std::make_unique<Compiled>())
{
  size_t nr = p.relations.size();
  c_->groups.resize(nr);
  for (size_t r = 0; r < nr; ++r) {
    const auto & rel = p.relations[r];
    c_->nin.push_back(rel.inputs.size());
    c_->nout.push_back(rel.outputs.size());
    std::vector<size_t> ip, op;
    std::vector<std::string> in_n, out_n;
    for (size_t i : rel.inputs) {
      ip.push_back(rel.value_index(i));
      in_n.push_back(rel.params[i].name);
    }
    for (size_t i : rel.outputs) {
      op.push_back(rel.value_index(i));
      out_n.push_back(rel.params[i].name);
    }
    c_->in_pos.push_back(ip);
    c_->out_pos.push_back(op);
    c_->in_names.push_back(in_n);
    c_->out_names.push_back(out_n);

    c_->groups[r].resize(p.constructors.size());
    for (size_t k = 0; k < p.constructors.size(); ++k) {
      const auto * list = plans.find(rel.name, static_cast<int>(k));
      if (!list) continue;
      CGroup & g = c_->groups[r][k];
      g.present = true;
      g.frame = rel.inputs.size() + rel.outputs.size();
      for (const auto & plan : *list) {
        g.alts.push_back(PlanCompiler(p, plan).take());
        g.frame = std::max(g.frame, g.alts.back().names.size());
      }
    }
  }
}

Evaluator::~Evaluator() = default;

EvalOutcome Evaluator::evaluate(const ProgramTerm & term, int relation,
                                std::span<const Value> inputs,
                                const EvalOptions & opts) const
{
  size_t nin = c_->nin[relation];
  size_t nout = c_->nout[relation];
  if (inputs.size() != nin)
    throw Error(ErrorKind::ArityMismatch,
                problem_.relations[relation].name + " takes " + std::to_string(nin) +
                    " inputs");
  Machine m(*c_, problem_, opts);
  m.arena.resize(nin + nout);
  for (size_t i = 0; i < nin; ++i) m.arena[i] = inputs[i];
  Machine::St st = m.call(term.raw(), relation, 0, 0);
  EvalOutcome out;
  out.status = status_of(st);
  out.steps = m.steps;
  if (st == Machine::St::Ambig) out.chcs = m.ambiguous;
  if (st == Machine::St::Ok) {
    for (size_t i = 0; i < nout; ++i) {
      out.outputs.push_back(m.arena[nin + i]);
      out.output[c_->out_names[relation][i]] = m.arena[nin + i];
    }
  }
  return out;
}

EvalOutcome Evaluator::evaluate(const ProgramTerm & term, const std::string & relation,
                                const Binding & inputs, const EvalOptions & opts) const
{
  int r = problem_.find_relation(relation);
  if (r < 0) throw Error(ErrorKind::UnresolvedName, "unknown relation '" + relation + "'");
  std::vector<Value> in;
  for (const auto & n : c_->in_names[r]) {
    auto it = inputs.find(n);
    if (it == inputs.end())
      throw Error(ErrorKind::UnboundVariable, "input '" + n + "' of " + relation + " not given");
    in.push_back(it->second);
  }
  return evaluate(term, r, in, opts);
}

ExampleResult Evaluator::run_examples(const ProgramTerm & term,
                                      const std::vector<Example> & examples,
                                      const EvalOptions & opts) const
{
  ExampleResult res;
  std::vector<Value> in;
  for (size_t i = 0; i < examples.size(); ++i) {
    const Example & ex = examples[i];
    in.clear();
    for (size_t k : c_->in_pos[ex.relation]) in.push_back(ex.args[k]);
    EvalOutcome o = evaluate(term, ex.relation, in, opts);
    res.steps += o.steps;
    if (!o.ok()) {
      res.pass = false;
      res.failing = static_cast<int>(i);
      res.reason = std::string(to_string(o.status));
      return res;
    }
    const auto & op = c_->out_pos[ex.relation];
    for (size_t k = 0; k < op.size(); ++k)
      if (!(o.outputs[k] == ex.args[op[k]])) {
        res.pass = false;
        res.failing = static_cast<int>(i);
        res.reason = c_->out_names[ex.relation][k] + " = " + o.outputs[k].str() +
                     ", expected " + ex.args[op[k]].str();
        return res;
      }
  }
  return res;
}

std::optional<Binding> Evaluator::trace(const ProgramTerm & term, int chc,
                                        const Binding & inputs,
                                        const EvalOptions & opts) const
{
  const Chc & c = problem_.chcs[chc];
  int r = problem_.find_relation(c.relation);
  if (term.is_hole() || term.constructor() != c.constructor)
    throw Error(ErrorKind::MissingPlan, "term root does not match the CHC constructor");
  const CGroup & g = c_->groups[r][c.constructor];
  const CPlan * plan = nullptr;
  for (const auto & a : g.alts)
    if (a.chc == chc) plan = &a;
  if (!plan) throw Error(ErrorKind::MissingPlan, "CHC has no plan");
  Machine m(*c_, problem_, opts);
  m.arena.resize(g.frame);
  for (size_t i = 0; i < c_->nin[r]; ++i) {
    auto it = inputs.find(c_->in_names[r][i]);
    if (it == inputs.end())
      throw Error(ErrorKind::UnboundVariable, "input '" + c_->in_names[r][i] + "' not given");
    m.arena[i] = it->second;
  }
  if (m.run(*plan, 0, plan->ins.size(), term.raw(), 0, 0) != Machine::St::Ok)
    return std::nullopt;
  Binding b;
  for (size_t s = 0; s < plan->names.size(); ++s) b[plan->names[s]] = m.arena[s];
  return b;
}

}  // namespace semgus
