#include "semgus/spec.hpp"

namespace semgus {

namespace {

bool closed_value(const Formula & f, Value & out)
{
  if (f.has_rel_app() || f.has_quantifier() || !f.free_vars().empty()) return false;
  try {
    out = eval_formula(f, {});
    return true;
  } catch (const Error &) {
    return false;
  }
}

Truth from_bool(bool b) { return b ? Truth::True : Truth::False; }

Truth negate(Truth t)
{
  if (t == Truth::Unknown) return t;
  return t == Truth::True ? Truth::False : Truth::True;
}

void conjuncts(const Formula & f, std::vector<Formula> & out)
{
  if (f.kind() == Formula::Kind::App && f.op() == Op::And) {
    for (const auto & a : f.args()) conjuncts(a, out);
    return;
  }
  out.push_back(f);
}

struct Unknowable
{
};

class Checker
{
 public:
  Checker(const Evaluator & ev, const ProgramTerm & t, const EvalOptions & o)
      : ev_(ev), p_(ev.problem()), t_(t), o_(o)
  {
  }

  Truth truth(const Formula & f, Binding & env)
  {
    if (!f.has_rel_app() && !f.has_quantifier()) {
      try {
        return from_bool(eval_formula(f, env).as_bool());
      } catch (const Error &) {
        return Truth::Unknown;
      }
    }
    switch (f.kind()) {
      case Formula::Kind::RelApp: return rel_truth(f, env);
      case Formula::Kind::Quant: return quant_truth(f, env);
      case Formula::Kind::App: break;
      default: return Truth::Unknown;
    }
    const auto & a = f.args();
    switch (f.op()) {
      case Op::Not: return negate(truth(a[0], env));
      case Op::And: {
        Truth r = Truth::True;
        for (const auto & x : a) {
          Truth t = truth(x, env);
          if (t == Truth::False) return t;
          if (t == Truth::Unknown) r = t;
        }
        return r;
      }
      case Op::Or: {
        Truth r = Truth::False;
        for (const auto & x : a) {
          Truth t = truth(x, env);
          if (t == Truth::True) return t;
          if (t == Truth::Unknown) r = t;
        }
        return r;
      }
      case Op::Implies: {
        Truth r = truth(a.back(), env);
        for (size_t i = a.size() - 1; i-- > 0;) {
          Truth l = truth(a[i], env);
          if (l == Truth::False || r == Truth::True) r = Truth::True;
          else if (l == Truth::Unknown || r == Truth::Unknown) r = Truth::Unknown;
          else r = Truth::False;
        }
        return r;
      }
      case Op::Xor:
      case Op::Eq:
      case Op::Distinct: {
        if (a.size() != 2) return Truth::Unknown;
        Truth x = truth(a[0], env), y = truth(a[1], env);
        if (x == Truth::Unknown || y == Truth::Unknown) return Truth::Unknown;
        return from_bool(f.op() == Op::Eq ? x == y : x != y);
      }
      case Op::Ite: {
        Truth c = truth(a[0], env);
        if (c == Truth::Unknown) {
          Truth x = truth(a[1], env), y = truth(a[2], env);
          return x == y ? x : Truth::Unknown;
        }
        return truth(c == Truth::True ? a[1] : a[2], env);
      }
      default: return Truth::Unknown;
    }
  }

 private:
  const Evaluator & ev_;
  const SynthesisProblem & p_;
  const ProgramTerm & t_;
  const EvalOptions & o_;

  // nullopt: the run failed (the atom is false for every output)
  std::optional<std::vector<Value>> run(const Formula & app, const Binding & env)
  {
    const auto & r = p_.relations[p_.find_relation(app.name())];
    std::vector<Value> in;
    for (size_t i : r.inputs) {
      try {
        in.push_back(eval_formula(app.args()[r.value_index(i)], env));
      } catch (const Error &) {
        throw Unknowable{};
      }
    }
    EvalOutcome o;
    try {
      o = ev_.evaluate(t_, p_.find_relation(app.name()), in, o_);
    } catch (const Error & e) {
      if (e.kind() == ErrorKind::DivByZero) return std::nullopt;
      throw;
    }
    if (!o.ok()) return std::nullopt;
    return o.outputs;
  }

  Truth rel_truth(const Formula & f, Binding & env)
  {
    try {
      auto out = run(f, env);
      if (!out) return Truth::False;
      const auto & r = p_.relations[p_.find_relation(f.name())];
      for (size_t k = 0; k < r.outputs.size(); ++k) {
        Value want = eval_formula(f.args()[r.value_index(r.outputs[k])], env);
        if (!(want == (*out)[k])) return Truth::False;
      }
      return Truth::True;
    } catch (const Unknowable &) {
      return Truth::Unknown;
    } catch (const Error & e) {
      if (e.kind() == ErrorKind::UnboundVariable || e.kind() == ErrorKind::DivByZero)
        return Truth::Unknown;
      throw;
    }
  }

  Truth quant_truth(const Formula & f, Binding & env)
  {
    const bool forall = f.is_forall();
    std::vector<Formula> atoms;
    const Formula & body = f.body();
    if (!forall) {
      conjuncts(body, atoms);
    } else if (body.kind() == Formula::Kind::App && body.op() == Op::Implies) {
      for (size_t i = 0; i + 1 < body.args().size(); ++i) conjuncts(body.args()[i], atoms);
    }

    Binding saved;
    std::set<std::string> open;
    for (const auto & b : f.binders()) {
      auto it = env.find(b.name);
      if (it != env.end()) {
        saved.emplace(b.name, it->second);
        env.erase(it);
      }
      open.insert(b.name);
    }
    auto restore = [&](Truth t) {
      for (const auto & b : f.binders()) env.erase(b.name);
      for (auto & [k, v] : saved) env[k] = v;
      return t;
    };

    std::vector<bool> used(atoms.size(), false);
    for (bool progress = true; progress && !open.empty();) {
      progress = false;
      for (size_t i = 0; i < atoms.size(); ++i) {
        const Formula & a = atoms[i];
        if (used[i] || a.kind() != Formula::Kind::RelApp) continue;
        const auto & r = p_.relations[p_.find_relation(a.name())];
        bool inputs_ready = true;
        for (size_t k : r.inputs)
          for (const auto & v : a.args()[r.value_index(k)].free_vars())
            if (open.count(v)) inputs_ready = false;
        if (!inputs_ready) continue;
        bool defines = false;
        for (size_t k : r.outputs) {
          const Formula & o = a.args()[r.value_index(k)];
          if (o.is_var() && open.count(o.name())) defines = true;
        }
        if (!defines) continue;
        used[i] = true;
        progress = true;
        std::optional<std::vector<Value>> out;
        try {
          out = run(a, env);
        } catch (const Unknowable &) {
          return restore(Truth::Unknown);
        }
        // no output exists: the conjunction (or the antecedent) is false
        if (!out) return restore(forall ? Truth::True : Truth::False);
        for (size_t k = 0; k < r.outputs.size(); ++k) {
          const Formula & o = a.args()[r.value_index(r.outputs[k])];
          if (o.is_var() && open.count(o.name())) {
            env[o.name()] = (*out)[k];
            open.erase(o.name());
          }
        }
      }
    }
    if (!open.empty()) return restore(Truth::Unknown);
    return restore(truth(body, env));
  }
};

}  // namespace

std::optional<Example> ground_example(const Formula & f, const SynthesisProblem & p)
{
  if (f.kind() != Formula::Kind::RelApp) return std::nullopt;
  Example ex;
  ex.relation = p.find_relation(f.name());
  for (const auto & a : f.args()) {
    Value v;
    if (!closed_value(a, v)) return std::nullopt;
    ex.args.push_back(std::move(v));
  }
  const auto & r = p.relations[ex.relation];
  if (!r.annotated()) return std::nullopt;
  return ex;
}

SpecSummary summarize_spec(const SynthesisProblem & p)
{
  SpecSummary s;
  for (size_t i = 0; i < p.constraints.size(); ++i) {
    if (auto ex = ground_example(p.constraints[i].formula, p)) {
      s.examples.push_back(std::move(*ex));
      s.example_of.push_back(static_cast<int>(i));
    } else {
      s.others.push_back(static_cast<int>(i));
    }
  }
  return s;
}

Truth check_instance(const Evaluator & ev, const ProgramTerm & term,
                     const Formula & constraint, const Binding & binding,
                     const EvalOptions & opts)
{
  Binding env = binding;
  return Checker(ev, term, opts).truth(constraint, env);
}

}  // namespace semgus
