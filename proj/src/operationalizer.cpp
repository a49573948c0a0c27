#include "semgus/operationalizer.hpp"

#include <algorithm>

namespace semgus {

namespace {

std::string join(const std::vector<std::string> & v)
{
  std::string s;
  for (const auto & x : v) s += (s.empty() ? "" : " ") + x;
  return s;
}

std::string chc_name(const Chc & chc, const SynthesisProblem & p)
{
  return chc.relation + "/" + p.constructors[chc.constructor].name + "#" +
         std::to_string(chc.alternative);
}

const SemanticRelation & annotated(const SynthesisProblem & p,
                                   const std::string & name, SourceLoc loc)
{
  const auto & r = p.relations[p.find_relation(name)];
  if (!r.annotated())
    throw Error(ErrorKind::MissingAnnotation,
                "relation " + name + " has no :input/:output annotation", loc);
  return r;
}

std::vector<std::string> pick(const Chc & chc, const SemanticRelation & r,
                              const std::vector<size_t> & idx)
{
  std::vector<std::string> out;
  for (size_t i : idx) out.push_back(chc.head_args[r.value_index(i)]);
  return out;
}

}  // namespace

std::string Instruction::str() const
{
  switch (kind) {
    case Kind::Invoke:
      return "invoke " + relation + " " +
             (child < 0 ? std::string("self") : "child " + std::to_string(child)) +
             " (" + join(in_vars) + ") -> (" + join(out_vars) + ")";
    case Kind::Guard: return "guard " + formula.str();
    case Kind::Compute: return "compute " + target + " := " + formula.str();
  }
  return "?";
}

std::string EvaluationPlan::str() const
{
  std::string s = "plan " + relation + " alt " + std::to_string(alternative) +
                  " in (" + join(inputs) + ") out (" + join(outputs) + ")\n";
  for (const auto & i : instructions) s += "  " + i.str() + "\n";
  return s;
}

DataflowGraph build_dataflow(const Chc & chc, const SynthesisProblem & p)
{
  const auto & head = annotated(p, chc.relation, chc.loc);
  auto head_in = pick(chc, head, head.inputs);
  std::set<std::string> inputs(head_in.begin(), head_in.end());

  DataflowGraph g;
  std::map<std::string, int> writer;
  auto claim = [&](const std::string & v, int node, SourceLoc loc) {
    if (inputs.count(v))
      throw Error(ErrorKind::DoubleWrite,
                  "'" + v + "' is a head input but is also written in " +
                      chc_name(chc, p),
                  loc);
    if (!writer.emplace(v, node).second)
      throw Error(ErrorKind::DoubleWrite,
                  "'" + v + "' is written twice in " + chc_name(chc, p), loc);
  };

  for (size_t i = 0; i < chc.body.size(); ++i) {
    const auto & app = chc.body[i];
    const auto & r = annotated(p, app.relation, app.loc);
    DataflowNode n{DataflowNode::Kind::Invoke, static_cast<int>(i), {}, {}, app.loc};
    for (size_t k : r.inputs) n.uses.insert(app.args[r.value_index(k)]);
    for (size_t k : r.outputs) {
      const auto & v = app.args[r.value_index(k)];
      claim(v, static_cast<int>(g.nodes.size()), app.loc);
      n.defines.insert(v);
    }
    g.nodes.push_back(std::move(n));
  }

  for (size_t i = 0; i < chc.conjuncts.size(); ++i) {
    const Formula & f = chc.conjuncts[i];
    DataflowNode n{DataflowNode::Kind::Guard, static_cast<int>(i), {}, f.free_vars(), f.loc()};
    if (f.kind() == Formula::Kind::App && f.op() == Op::Eq && f.args().size() == 2) {
      for (int side = 0; side < 2; ++side) {
        const Formula & lhs = f.args()[side];
        const Formula & rhs = f.args()[1 - side];
        if (!lhs.is_var()) continue;
        const std::string & v = lhs.name();
        auto rv = rhs.free_vars();
        if (inputs.count(v) || writer.count(v) || rv.count(v)) continue;
        n.kind = DataflowNode::Kind::Compute;
        n.defines = {v};
        n.uses = std::move(rv);
        writer.emplace(v, static_cast<int>(g.nodes.size()));
        break;
      }
    }
    g.nodes.push_back(std::move(n));
  }

  for (size_t u = 0; u < g.nodes.size(); ++u)
    for (const auto & v : g.nodes[u].uses) {
      auto it = writer.find(v);
      if (it != writer.end()) g.edges.emplace_back(it->second, static_cast<int>(u));
    }
  return g;
}

EvaluationPlan order_chc(const DataflowGraph & g, const Chc & chc,
                         const SynthesisProblem & p)
{
  const auto & head = annotated(p, chc.relation, chc.loc);
  EvaluationPlan plan;
  plan.relation = chc.relation;
  plan.constructor = chc.constructor;
  plan.alternative = chc.alternative;
  plan.inputs = pick(chc, head, head.inputs);
  plan.outputs = pick(chc, head, head.outputs);
  for (size_t i = 0; i < p.chcs.size(); ++i)
    if (&p.chcs[i] == &chc) plan.chc = static_cast<int>(i);

  std::set<std::string> defined(plan.inputs.begin(), plan.inputs.end());
  std::vector<bool> done(g.nodes.size(), false);
  auto ready = [&](size_t i) {
    for (const auto & v : g.nodes[i].uses)
      if (!defined.count(v)) return false;
    return true;
  };
  auto before = [&](size_t a, size_t b) {
    // source order; unknown locations fall back to node order
    const auto & la = g.nodes[a].loc;
    const auto & lb = g.nodes[b].loc;
    if (la.offset != lb.offset) return la.offset < lb.offset;
    return a < b;
  };

  for (size_t step = 0; step < g.nodes.size(); ++step) {
    int best = -1;
    bool best_guard = false;
    for (size_t i = 0; i < g.nodes.size(); ++i) {
      if (done[i] || !ready(i)) continue;
      bool guard = g.nodes[i].kind == DataflowNode::Kind::Guard;
      if (best < 0 || (guard && !best_guard) ||
          (guard == best_guard && before(i, static_cast<size_t>(best)))) {
        best = static_cast<int>(i);
        best_guard = guard;
      }
    }
    if (best < 0) {
      // nothing ready: an input nobody produces, or a cycle
      std::set<std::string> producible(defined);
      for (size_t i = 0; i < g.nodes.size(); ++i)
        producible.insert(g.nodes[i].defines.begin(), g.nodes[i].defines.end());
      std::string cycle;
      for (size_t i = 0; i < g.nodes.size(); ++i) {
        if (done[i]) continue;
        for (const auto & v : g.nodes[i].uses)
          if (!producible.count(v)) {
            std::string where = g.nodes[i].kind == DataflowNode::Kind::Invoke
                                    ? chc.body[g.nodes[i].index].relation
                                    : chc.conjuncts[g.nodes[i].index].str();
            throw Error(ErrorKind::UngroundedInput,
                        "'" + v + "' is never computed before use in " + where +
                            " (" + chc_name(chc, p) + ")",
                        g.nodes[i].loc);
          }
        cycle += " " + std::to_string(i);
      }
      throw Error(ErrorKind::CyclicDataflow,
                  "cyclic dependencies among nodes" + cycle + " of " + chc_name(chc, p),
                  chc.loc);
    }
    const auto & n = g.nodes[best];
    done[best] = true;
    defined.insert(n.defines.begin(), n.defines.end());
    Instruction ins;
    ins.loc = n.loc;
    if (n.kind == DataflowNode::Kind::Invoke) {
      const auto & app = chc.body[n.index];
      const auto & r = p.relations[p.find_relation(app.relation)];
      ins.kind = Instruction::Kind::Invoke;
      ins.child = chc.term_index(app.term);
      ins.relation = app.relation;
      for (size_t k : r.inputs) ins.in_vars.push_back(app.args[r.value_index(k)]);
      for (size_t k : r.outputs) ins.out_vars.push_back(app.args[r.value_index(k)]);
    } else if (n.kind == DataflowNode::Kind::Compute) {
      const Formula & f = chc.conjuncts[n.index];
      ins.kind = Instruction::Kind::Compute;
      ins.target = *n.defines.begin();
      ins.formula = f.args()[0].is_var() && f.args()[0].name() == ins.target
                        ? f.args()[1]
                        : f.args()[0];
    } else {
      ins.kind = Instruction::Kind::Guard;
      ins.formula = chc.conjuncts[n.index];
    }
    plan.instructions.push_back(std::move(ins));
  }

  for (const auto & o : plan.outputs)
    if (!defined.count(o))
      throw Error(ErrorKind::UndefinedOutput,
                  "output '" + o + "' is never defined in " + chc_name(chc, p), chc.loc);
  return plan;
}

EvaluationPlan operationalize(const Chc & chc, const SynthesisProblem & p)
{
  return order_chc(build_dataflow(chc, p), chc, p);
}

const std::vector<EvaluationPlan> * PlanTable::find(const std::string & relation,
                                                    int constructor) const
{
  auto it = plans.find({relation, constructor});
  return it == plans.end() ? nullptr : &it->second;
}

std::string PlanTable::str(const SynthesisProblem & p) const
{
  std::string s;
  for (const auto & [key, list] : plans)
    for (const auto & plan : list)
      s += ";; " + key.first + " " + p.constructors[key.second].name + "\n" + plan.str();
  for (const auto & e : errors) s += ";; error: " + std::string(e.what()) + "\n";
  return s;
}

PlanTable operationalize_all(const SynthesisProblem & p)
{
  PlanTable table;
  std::set<std::pair<std::string, int>> failed;
  for (const auto & chc : p.chcs) {
    std::pair<std::string, int> key{chc.relation, chc.constructor};
    try {
      auto plan = operationalize(chc, p);
      table.plans[key].push_back(std::move(plan));
    } catch (const Error & e) {
      table.errors.push_back(e);
      failed.insert(key);
    }
  }
  for (const auto & k : failed) table.plans.erase(k);
  return table;
}

}  // namespace semgus
