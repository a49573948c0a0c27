#include "semgus/smt.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <map>

namespace semgus {

std::string_view to_string(VerificationResult::Status s)
{
  switch (s) {
    case VerificationResult::Status::Verified: return "verified";
    case VerificationResult::Status::Refuted: return "refuted";
    case VerificationResult::Status::Inconclusive: return "inconclusive";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Emission

namespace {

using RootNames = std::map<std::string, std::string>;  // relation -> root fn

SExpr smt_formula(const Formula & f, const RootNames & roots)
{
  switch (f.kind()) {
    case Formula::Kind::Var: return SExpr::symbol(f.name());
    case Formula::Kind::Literal: return f.to_sexpr();
    case Formula::Kind::App: {
      std::vector<SExpr> items{SExpr::symbol(std::string(op_name(f.op())))};
      for (const auto & a : f.args()) items.push_back(smt_formula(a, roots));
      return SExpr::list(std::move(items));
    }
    case Formula::Kind::RelApp: {
      auto it = roots.find(f.name());
      if (it == roots.end())
        throw Error(ErrorKind::EmptySemantics, "no encoding for " + f.name(), f.loc());
      std::vector<SExpr> items{SExpr::symbol(it->second)};
      for (const auto & a : f.args()) items.push_back(smt_formula(a, roots));
      return SExpr::list(std::move(items));
    }
    case Formula::Kind::Quant: {
      std::vector<SExpr> bs;
      for (const auto & b : f.binders())
        bs.push_back(SExpr::list({SExpr::symbol(b.name), b.sort.to_sexpr()}));
      return SExpr::list({SExpr::symbol(f.is_forall() ? "forall" : "exists"),
                          SExpr::list(std::move(bs)), smt_formula(f.body(), roots)});
    }
  }
  return SExpr();
}

void collect_relations(const Formula & f, std::vector<std::string> & out)
{
  if (f.kind() == Formula::Kind::RelApp &&
      std::find(out.begin(), out.end(), f.name()) == out.end())
    out.push_back(f.name());
  for (const auto & a : f.args()) collect_relations(a, out);
}

void check_sort(const Sort & s)
{
  if (!s.is_value())
    throw Error(ErrorKind::UnsupportedSort, "sort " + s.str() + " cannot be encoded");
}

struct Emitter
{
  const SynthesisProblem & p;
  std::vector<const ProgramTerm *> nodes;     // preorder
  std::vector<std::vector<int>> child_ids;    // node -> child node ids

  struct Fn
  {
    int node;
    int relation;
    std::string name;
    std::vector<int> callees;  // fn indices
  };
  std::vector<Fn> fns;
  std::map<std::pair<int, int>, int> fn_index;

  explicit Emitter(const SynthesisProblem & p) : p(p) {}

  int number(const ProgramTerm & t)
  {
    if (t.is_hole())
      throw Error(ErrorKind::IncompleteTerm, "cannot encode a term with holes");
    int id = static_cast<int>(nodes.size());
    nodes.push_back(&t);
    child_ids.emplace_back();
    for (const auto & c : t.children()) {
      int k = number(c);
      child_ids[id].push_back(k);
    }
    return id;
  }

  int function(int node, int rel)
  {
    auto [it, fresh] = fn_index.emplace(std::make_pair(node, rel), static_cast<int>(fns.size()));
    if (!fresh) return it->second;
    int id = it->second;
    fns.push_back({node, rel, p.relations[rel].name + "_n" + std::to_string(node), {}});
    int ctor = nodes[node]->constructor();
    auto chcs = p.chcs_for(p.relations[rel].name, ctor);
    if (chcs.empty())
      throw Error(ErrorKind::EmptySemantics, p.relations[rel].name + " has no CHC for " +
                                                 p.constructors[ctor].name);
    for (int ci : chcs)
      for (const auto & app : p.chcs[ci].body) {
        int ti = p.chcs[ci].term_index(app.term);
        int target = ti < 0 ? node : child_ids[node][ti];
        int callee = function(target, p.find_relation(app.relation));
        auto & cs = fns[id].callees;
        if (std::find(cs.begin(), cs.end(), callee) == cs.end()) cs.push_back(callee);
      }
    return id;
  }

  std::string signature(const Fn & fn) const
  {
    std::vector<SExpr> ps;
    for (const auto & v : p.relations[fn.relation].value_params()) {
      check_sort(v.sort);
      ps.push_back(SExpr::list({SExpr::symbol(v.name), v.sort.to_sexpr()}));
    }
    return quote_symbol(fn.name) + " " + print_sexpr(SExpr::list(std::move(ps))) + " Bool";
  }

  std::string body(const Fn & fn) const
  {
    int ctor = nodes[fn.node]->constructor();
    std::vector<SExpr> alts;
    for (int ci : p.chcs_for(p.relations[fn.relation].name, ctor)) {
      const Chc & c = p.chcs[ci];
      std::vector<SExpr> conj{SExpr::symbol("and")};
      for (const auto & f : c.conjuncts) conj.push_back(smt_formula(f, {}));
      for (const auto & app : c.body) {
        int ti = c.term_index(app.term);
        int target = ti < 0 ? fn.node : child_ids[fn.node][ti];
        const Fn & callee = fns[fn_index.at({target, p.find_relation(app.relation)})];
        std::vector<SExpr> call{SExpr::symbol(callee.name)};
        for (const auto & a : app.args) call.push_back(SExpr::symbol(a));
        conj.push_back(SExpr::list(std::move(call)));
      }
      SExpr phi = conj.size() == 1   ? SExpr::boolean(true)
                  : conj.size() == 2 ? conj[1]
                                     : SExpr::list(std::move(conj));
      if (!c.aux.empty()) {
        std::vector<SExpr> bs;
        for (const auto & a : c.aux) {
          check_sort(a.sort);
          bs.push_back(SExpr::list({SExpr::symbol(a.name), a.sort.to_sexpr()}));
        }
        phi = SExpr::list({SExpr::symbol("exists"), SExpr::list(std::move(bs)), phi});
      }
      alts.push_back(std::move(phi));
    }
    if (alts.size() == 1) return print_sexpr(alts[0]);
    alts.insert(alts.begin(), SExpr::symbol("or"));
    return print_sexpr(SExpr::list(std::move(alts)));
  }

  // Tarjan; SCCs come out callees-first.
  std::vector<std::vector<int>> sccs() const
  {
    int n = static_cast<int>(fns.size()), counter = 0;
    std::vector<int> index(n, -1), low(n, 0), stack;
    std::vector<bool> on(n, false);
    std::vector<std::vector<int>> out;
    std::function<void(int)> visit = [&](int v) {
      index[v] = low[v] = counter++;
      stack.push_back(v);
      on[v] = true;
      for (int w : fns[v].callees) {
        if (index[w] < 0) {
          visit(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on[w]) {
          low[v] = std::min(low[v], index[w]);
        }
      }
      if (low[v] == index[v]) {
        std::vector<int> comp;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
    };
    for (int v = 0; v < n; ++v)
      if (index[v] < 0) visit(v);
    return out;
  }
};

}  // namespace

std::string SmtScript::text() const
{
  std::string s;
  for (size_t i = 0; i < queries.size(); ++i) {
    if (i) s += "(reset)\n";
    s += queries[i].text;
  }
  if (queries.empty()) s = definitions;
  return s;
}

SmtScript emit_smt_script(const ProgramTerm & term, const SynthesisProblem & p)
{
  Emitter em(p);
  em.number(term);

  std::vector<std::string> used;
  for (const auto & c : p.constraints) collect_relations(c.formula, used);
  RootNames roots;
  for (const auto & r : used) {
    int fn = em.function(0, p.find_relation(r));
    roots[r] = em.fns[fn].name;
  }

  SmtScript script;
  std::string defs = "(set-logic ALL)\n";
  for (const auto & comp : em.sccs()) {
    const auto & first = em.fns[comp[0]];
    bool self_loop = std::find(first.callees.begin(), first.callees.end(), comp[0]) !=
                     first.callees.end();
    if (comp.size() == 1 && !self_loop) {
      defs += "(define-fun " + em.signature(first) + " " + em.body(first) + ")\n";
      continue;
    }
    std::string sigs, bodies;
    for (int f : comp) {
      sigs += (sigs.empty() ? "(" : " (") + em.signature(em.fns[f]) + ")";
      bodies += (bodies.empty() ? "" : " ") + em.body(em.fns[f]);
      ++script.recursive_functions;
    }
    defs += "(define-funs-rec (" + sigs + ") (" + bodies + "))\n";
  }
  for (const auto & fn : em.fns) script.functions.push_back(fn.name);
  script.definitions = defs;

  // ground constraints: one positive query
  std::string ground;
  for (size_t i = 0; i < p.constraints.size(); ++i) {
    const Formula & f = p.constraints[i].formula;
    if (!f.free_vars().empty()) continue;
    ground += "(assert " + print_sexpr(smt_formula(f, roots)) + ")\n";
    ++script.positive_assertions;
  }
  if (!ground.empty())
    script.queries.push_back({SmtQuery::Expect::Sat, -1, {}, defs + ground + "(check-sat)\n"});

  // universal constraints: refute the negation, one query each
  for (size_t i = 0; i < p.constraints.size(); ++i) {
    const Formula & f = p.constraints[i].formula;
    auto fv = f.free_vars();
    if (fv.empty()) continue;
    SmtQuery q{SmtQuery::Expect::Unsat, static_cast<int>(i), {}, defs};
    for (const auto & v : p.variables)
      if (fv.count(v.name)) {
        q.vars.push_back(v);
        q.text += "(declare-const " + quote_symbol(v.name) + " " + v.sort.str() + ")\n";
      }
    q.text += "(assert (not " + print_sexpr(smt_formula(f, roots)) + "))\n(check-sat)\n(get-model)\n";
    script.queries.push_back(std::move(q));
  }
  return script;
}

// ---------------------------------------------------------------------------
// Subprocess

SolverConfig solver_config_for(const std::string & path)
{
  SolverConfig cfg;
  cfg.path = path;
  std::string base = path.substr(path.find_last_of('/') + 1);
  if (base.find("cvc") != std::string::npos) cfg.args = {"--lang=smt2"};
  return cfg;
}

SolverConfig default_solver_config()
{
  if (const char * env = std::getenv("SEMGUS_SMT_SOLVER"); env && *env)
    return solver_config_for(env);
  return SolverConfig{};
}

SolverRun run_solver(const SolverConfig & cfg, const std::string & script)
{
  ::signal(SIGPIPE, SIG_IGN);
  int in[2], out[2], err[2], status_pipe[2];
  if (pipe(in) || pipe(out) || pipe(err) || pipe2(status_pipe, O_CLOEXEC))
    throw Error(ErrorKind::SolverCrash, std::string("pipe: ") + std::strerror(errno));

  pid_t pid = fork();
  if (pid < 0) throw Error(ErrorKind::SolverCrash, std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    dup2(in[0], 0);
    dup2(out[1], 1);
    dup2(err[1], 2);
    for (int fd : {in[0], in[1], out[0], out[1], err[0], err[1], status_pipe[0]}) close(fd);
    std::vector<char *> argv;
    argv.push_back(const_cast<char *>(cfg.path.c_str()));
    for (const auto & a : cfg.args) argv.push_back(const_cast<char *>(a.c_str()));
    argv.push_back(nullptr);
    execvp(cfg.path.c_str(), argv.data());
    int e = errno;
    (void)!write(status_pipe[1], &e, sizeof e);
    _exit(127);
  }
  close(in[0]);
  close(out[1]);
  close(err[1]);
  close(status_pipe[1]);

  int exec_errno = 0;
  if (read(status_pipe[0], &exec_errno, sizeof exec_errno) == sizeof exec_errno) {
    close(status_pipe[0]);
    close(in[1]);
    close(out[0]);
    close(err[0]);
    waitpid(pid, nullptr, 0);
    throw Error(ErrorKind::SolverCrash,
                "cannot run '" + cfg.path + "': " + std::strerror(exec_errno));
  }
  close(status_pipe[0]);

  for (int fd : {in[1], out[0], err[0]}) fcntl(fd, F_SETFL, fcntl(fd, F_GETFL) | O_NONBLOCK);

  SolverRun run;
  size_t written = 0;
  int wfd = in[1];
  if (script.empty()) {
    close(wfd);
    wfd = -1;
  }
  bool out_open = true, err_open = true;
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(cfg.time_limit));
  char buf[8192];
  while (out_open || err_open) {
    auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      run.timed_out = true;
      kill(pid, SIGKILL);
      break;
    }
    int ms = static_cast<int>(
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count()) + 1;
    pollfd fds[3];
    int n = 0;
    int iw = -1, io = -1, ie = -1;
    if (wfd >= 0) fds[iw = n++] = {wfd, POLLOUT, 0};
    if (out_open) fds[io = n++] = {out[0], POLLIN, 0};
    if (err_open) fds[ie = n++] = {err[0], POLLIN, 0};
    int r = poll(fds, n, ms);
    if (r < 0 && errno != EINTR) break;
    if (r <= 0) continue;
    if (iw >= 0 && fds[iw].revents) {
      ssize_t k = write(wfd, script.data() + written, script.size() - written);
      if (k > 0) written += static_cast<size_t>(k);
      if (k < 0 && errno != EAGAIN) written = script.size();
      if (written >= script.size()) {
        close(wfd);
        wfd = -1;
      }
    }
    auto drain = [&](int idx, int fd, std::string & dst, bool & open) {
      if (idx < 0 || !fds[idx].revents) return;
      ssize_t k = read(fd, buf, sizeof buf);
      if (k > 0) dst.append(buf, static_cast<size_t>(k));
      else if (k == 0 || errno != EAGAIN) open = false;
    };
    drain(io, out[0], run.out, out_open);
    drain(ie, err[0], run.err, err_open);
  }
  if (wfd >= 0) close(wfd);
  close(out[0]);
  close(err[0]);
  int status = 0;
  waitpid(pid, &status, 0);
  run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return run;
}

Binding parse_model(const std::string & text, const std::vector<TypedVar> & vars)
{
  std::vector<SExpr> items;
  try {
    items = read_sexprs(text);
  } catch (const Error & e) {
    throw Error(ErrorKind::ModelParseError, std::string("unreadable solver output: ") + e.what());
  }
  Binding b;
  std::function<void(const SExpr &)> scan = [&](const SExpr & e) {
    if (!e.is_list()) return;
    if (e.has_head("define-fun") && e.size() == 5 && e[1].is_symbol() &&
        e[2].is_list() && e[2].size() == 0) {
      for (const auto & v : vars)
        if (v.name == e[1].name()) {
          Value val;
          if (!literal_value(e[4], val) || val.sort() != v.sort)
            throw Error(ErrorKind::ModelParseError,
                        "cannot read model value for " + v.name + ": " + print_sexpr(e[4]));
          b[v.name] = val;
        }
      return;
    }
    for (const auto & x : e.items()) scan(x);
  };
  for (const auto & it : items) scan(it);
  // unconstrained constants may be omitted by the solver
  for (const auto & v : vars)
    if (!b.count(v.name)) b[v.name] = Value::default_of(v.sort);
  return b;
}

// ---------------------------------------------------------------------------
// Verification

namespace {

std::string first_answer(const SolverRun & run, const SolverConfig & cfg)
{
  std::vector<SExpr> items;
  try {
    items = read_sexprs(run.out);
  } catch (const Error &) {
    items.clear();
  }
  for (const auto & e : items) {
    if (e.is_symbol("sat") || e.is_symbol("unsat") || e.is_symbol("unknown")) return e.name();
    if (e.has_head("error")) {
      std::string msg = print_sexpr(e);
      throw Error(ErrorKind::SolverCrash, cfg.path + " reported " + msg.substr(0, 300));
    }
  }
  if (run.timed_out) return "timeout";
  std::string excerpt = (run.err.empty() ? run.out : run.err).substr(0, 300);
  throw Error(ErrorKind::SolverCrash,
              cfg.path + " exited with code " + std::to_string(run.exit_code) +
                  " without an answer: " + excerpt);
}

}  // namespace

VerificationResult verify_logical(const ProgramTerm & term, const SynthesisProblem & p,
                                  const SolverConfig & cfg, const Evaluator * ev)
{
  SmtScript script = emit_smt_script(term, p);
  VerificationResult res;
  for (const auto & q : script.queries) {
    SolverRun run = run_solver(cfg, q.text);
    ++res.queries;
    std::string ans = first_answer(run, cfg);
    if (ans == "timeout" || ans == "unknown") {
      res.status = VerificationResult::Status::Inconclusive;
      res.reason = ans == "timeout" ? "timeout" : "solver-unknown";
      res.constraint = q.constraint;
      return res;
    }
    bool expected = (q.expect == SmtQuery::Expect::Sat) == (ans == "sat");
    if (expected) continue;

    res.status = VerificationResult::Status::Refuted;
    res.constraint = q.constraint;
    if (q.expect == SmtQuery::Expect::Unsat) res.counterexample = parse_model(run.out, q.vars);
    if (ev) {
      // a counterexample the evaluator cannot reproduce is not trusted
      bool replays = false;
      try {
        if (q.constraint >= 0) {
          replays = check_instance(*ev, term, p.constraints[q.constraint].formula,
                                   res.counterexample) != Truth::True;
        } else {
          for (const auto & c : p.constraints)
            if (c.formula.free_vars().empty() &&
                check_instance(*ev, term, c.formula, {}) != Truth::True)
              replays = true;
        }
      } catch (const Error &) {
        replays = true;  // not executable: trust the solver
      }
      if (!replays) {
        res.status = VerificationResult::Status::Inconclusive;
        res.reason = "counterexample does not replay";
      }
    }
    return res;
  }
  res.status = VerificationResult::Status::Verified;
  return res;
}

}  // namespace semgus
