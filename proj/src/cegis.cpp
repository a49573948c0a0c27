#include "semgus/cegis.hpp"

#include <algorithm>

namespace semgus {

std::string_view to_string(Strategy s)
{
  switch (s) {
    case Strategy::TopDown: return "top-down";
    case Strategy::BottomUpSize: return "bottom-up-size";
    case Strategy::BottomUpHeight: return "bottom-up-height";
  }
  return "?";
}

std::optional<Strategy> parse_strategy(std::string_view s)
{
  for (auto k : {Strategy::TopDown, Strategy::BottomUpSize, Strategy::BottomUpHeight})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

std::string_view to_string(SolveResult::Status s)
{
  switch (s) {
    case SolveResult::Status::Solved: return "solved";
    case SolveResult::Status::Exhausted: return "exhausted";
    case SolveResult::Status::Budget: return "budget";
    case SolveResult::Status::Timeout: return "timeout";
    case SolveResult::Status::Inconclusive: return "inconclusive";
    case SolveResult::Status::Memout: return "memout";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::unique_ptr<TermStream> make_stream(const Grammar & g, const SolveOptions & opts,
                                        const EnumLimits & limits)
{
  if (opts.strategy == Strategy::TopDown)
    return std::make_unique<TopDownEnumerator>(g, g.start, limits);
  HookChain hooks;
  for (const auto & h : opts.hooks) hooks.register_hook(h);
  auto metric = opts.strategy == Strategy::BottomUpSize ? BankMetric::Size : BankMetric::Height;
  return std::make_unique<BottomUpEnumerator>(g, g.start, metric, std::move(hooks), limits);
}

SolveResult::Status from_stream(StreamEnd e)
{
  switch (e) {
    case StreamEnd::Budget: return SolveResult::Status::Budget;
    case StreamEnd::Timeout: return SolveResult::Status::Timeout;
    case StreamEnd::Memout: return SolveResult::Status::Memout;
    default: return SolveResult::Status::Exhausted;
  }
}

}  // namespace

SolveResult cegis(const SynthesisProblem & p, const Evaluator & ev, const SolveOptions & opts)
{
  if (!p.target) throw Error(ErrorKind::AbsentSynthTarget, "no synth-fun");
  const auto t0 = Clock::now();
  EnumLimits limits = opts.limits;
  if (opts.timeout > 0)
    limits.deadline = t0 + std::chrono::duration_cast<Clock::duration>(
                               std::chrono::duration<double>(opts.timeout));

  const SpecSummary spec = summarize_spec(p);
  const Grammar g = p.search_grammar();
  SolveResult res;
  auto & inst = res.instances;
  for (int i : spec.others)
    if (p.constraints[i].formula.free_vars().empty()) inst.push_back({i, {}});
  const size_t seeded = inst.size();

  auto passes = [&](const ProgramTerm & t) {
    try {
      ExampleResult r = ev.run_examples(t, spec.examples, opts.eval);
      res.evaluations += r.pass ? spec.examples.size() : static_cast<size_t>(r.failing) + 1;
      if (!r.pass) return false;
      // newest counterexamples are the most likely to reject
      for (size_t i = inst.size(); i-- > 0;) {
        ++res.evaluations;
        if (check_instance(ev, t, p.constraints[inst[i].constraint].formula, inst[i].binding,
                           opts.eval) == Truth::False)
          return false;
      }
      return true;
    } catch (const Error & e) {
      if (e.kind() == ErrorKind::DivByZero) return false;
      throw;
    }
  };
  auto finish = [&](SolveResult::Status s) {
    res.status = s;
    res.seconds = since(t0);
    return res;
  };

  bool inconclusive = false;
  for (;;) {
    EnumLimits round = limits;
    if (limits.max_candidates) {
      if (res.candidates >= limits.max_candidates) return finish(SolveResult::Status::Budget);
      round.max_candidates = limits.max_candidates - res.candidates;
    }
    auto stream = make_stream(g, opts, round);
    bool restart = false;
    while (auto t = stream->next()) {
      ++res.candidates;
      // a single candidate may burn its whole fuel budget per example
      if (limits.deadline && Clock::now() >= *limits.deadline)
        return finish(SolveResult::Status::Timeout);
      if (!passes(*t)) continue;

      if (spec.example_only()) {
        // confirmation pass
        ++res.verifications;
        if (ev.run_examples(*t, spec.examples, opts.eval).pass) {
          res.solution = *t;
          return finish(SolveResult::Status::Solved);
        }
        continue;
      }

      SolverConfig cfg = opts.smt;
      if (limits.deadline) {
        double left = std::chrono::duration<double>(*limits.deadline - Clock::now()).count();
        if (left <= 0) return finish(SolveResult::Status::Timeout);
        cfg.time_limit = std::min(cfg.time_limit, left);
      }
      CegisIteration it;
      it.candidate = *t;
      auto v0 = Clock::now();
      VerificationResult vr;
      try {
        vr = verify_logical(*t, p, cfg, &ev);
      } catch (const Error & e) {
        if (e.kind() != ErrorKind::UnsupportedSort && e.kind() != ErrorKind::EmptySemantics)
          throw;
        vr.status = VerificationResult::Status::Inconclusive;
        vr.reason = "unsupported-construct";
      }
      ++res.verifications;
      it.seconds = since(v0);
      it.outcome = vr.status;
      it.constraint = vr.constraint;
      it.counterexample = vr.counterexample;
      it.reason = vr.reason;
      res.trace.push_back(it);

      if (vr.status == VerificationResult::Status::Verified) {
        res.solution = *t;
        return finish(SolveResult::Status::Solved);
      }
      if (vr.status == VerificationResult::Status::Inconclusive) {
        inconclusive = true;
        continue;
      }
      if (vr.constraint >= 0) {
        SpecInstance si{vr.constraint, vr.counterexample};
        if (std::find(inst.begin() + static_cast<long>(seeded), inst.end(), si) == inst.end()) {
          inst.push_back(std::move(si));
          ++res.counterexamples;
          restart = true;
          break;
        }
      }
    }
    if (restart) continue;
    auto s = from_stream(stream->end());
    if (inconclusive &&
        (s == SolveResult::Status::Exhausted || s == SolveResult::Status::Budget))
      s = SolveResult::Status::Inconclusive;
    return finish(s);
  }
}

SolveResult solve(const SynthesisProblem & p, const SolveOptions & opts)
{
  PlanTable plans = operationalize_all(p);
  if (!plans.ok() && !p.constraints.empty()) {
    const Error & first = plans.errors.front();
    throw Error(ErrorKind::NotOperationalizable,
                std::string(to_string(first.kind())) + ": " + first.detail(), first.loc());
  }
  Evaluator ev(p, plans);
  return cegis(p, ev, opts);
}

}  // namespace semgus
