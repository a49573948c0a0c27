// semgus: parse, solve, verify, translate and benchmark SemGuS problems.

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "semgus/cegis.hpp"
#include "semgus/ir.hpp"
#include "semgus/sygus.hpp"

namespace fs = std::filesystem;
using namespace semgus;

namespace {

enum Exit
{
  kOk = 0,
  kError = 1,
  kExhausted = 2,
  kTimeout = 3,
  kInconclusive = 4,
  kRefuted = 5,
  kNotInFragment = 6,
  kMemout = 7,
};

std::string read_file(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string & path, const std::string & text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Error(ErrorKind::IoError, "cannot write " + path);
}

bool is_sygus(const std::string & path) { return fs::path(path).extension() == ".sl"; }

// .sl files are translated on the fly
SynthesisProblem load_problem(const std::string & path)
{
  std::string text = read_file(path);
  if (is_sygus(path)) return sygus_to_semgus(parse_sygus(text));
  return parse_problem(text);
}

int report(const std::string & path, const Error & e)
{
  std::cerr << path << ":";
  if (e.loc().known()) std::cerr << e.loc().str() << ":";
  std::cerr << " error: " << to_string(e.kind());
  if (!e.detail().empty()) std::cerr << ": " << e.detail();
  std::cerr << "\n";
  return e.kind() == ErrorKind::NotInFragment ? kNotInFragment : kError;
}

int exit_code(SolveResult::Status s)
{
  switch (s) {
    case SolveResult::Status::Solved: return kOk;
    case SolveResult::Status::Exhausted:
    case SolveResult::Status::Budget: return kExhausted;
    case SolveResult::Status::Timeout: return kTimeout;
    case SolveResult::Status::Inconclusive: return kInconclusive;
    case SolveResult::Status::Memout: return kMemout;
  }
  return kError;
}

std::string show(const Binding & b)
{
  std::string s;
  for (const auto & [k, v] : b) s += (s.empty() ? "" : " ") + k + "=" + v.str();
  return s;
}

// ---------------------------------------------------------------------------

struct ParseArgs
{
  std::string file;
  std::string format = "json";
  bool dump_plans = false;
};

int cmd_parse(const ParseArgs & a)
{
  try {
    SynthesisProblem p = load_problem(a.file);
    if (a.format == "json") std::cout << to_json(p).dump(2) << "\n";
    else std::cout << to_sexpr_dump(p);
    if (a.dump_plans) {
      PlanTable plans = operationalize_all(p);
      std::cout << plans.str(p);
      for (const auto & e : plans.errors) report(a.file, e);
      if (!plans.ok()) return kError;
    }
    return kOk;
  } catch (const Error & e) {
    return report(a.file, e);
  }
}

struct SolveArgs
{
  std::string file;
  std::string solver = "top-down";
  double timeout = 0;
  uint64_t fuel = EvalOptions{}.fuel;
  std::string smt_solver;
  double smt_timeout = 10;
  bool strict = false;
  uint32_t max_size = 0;
  uint64_t max_candidates = 0;
  size_t memory_mb = 4096;
  bool stats = false;
};

SolveOptions solve_options(const SolveArgs & a)
{
  SolveOptions o;
  o.strategy = *parse_strategy(a.solver);
  o.timeout = a.timeout;
  o.eval.fuel = a.fuel;
  o.eval.mode = a.strict ? EvalMode::Strict : EvalMode::FirstMatch;
  if (!a.smt_solver.empty()) o.smt = solver_config_for(a.smt_solver);
  o.smt.time_limit = a.smt_timeout;
  o.limits.max_size = a.max_size;
  o.limits.max_candidates = a.max_candidates;
  o.limits.memory_mb = a.memory_mb;
  return o;
}

int cmd_solve(const SolveArgs & a)
{
  try {
    SynthesisProblem p = load_problem(a.file);
    SolveResult r = solve(p, solve_options(a));
    if (r.solution) std::cout << format_solution(*r.solution, p) << "\n";
    else std::cerr << a.file << ": " << to_string(r.status) << "\n";
    if (a.stats)
      std::cerr << "status " << to_string(r.status) << ", " << r.candidates << " candidates, "
                << r.evaluations << " evaluations, " << r.counterexamples
                << " counterexamples, " << r.seconds << " s\n";
    return exit_code(r.status);
  } catch (const Error & e) {
    return report(a.file, e);
  }
}

struct VerifyArgs
{
  std::string file;
  std::string candidate;
  std::string mode = "examples";
  uint64_t fuel = EvalOptions{}.fuel;
  std::string smt_solver;
  double smt_timeout = 10;
};

int cmd_verify(const VerifyArgs & a)
{
  std::string where = a.file;
  try {
    SynthesisProblem p = load_problem(a.file);
    where = a.candidate;
    ProgramTerm t = parse_solution(read_file(a.candidate), p);
    if (!t.complete())
      throw Error(ErrorKind::IncompleteTerm, "candidate has " + std::to_string(t.hole_count()) + " holes");
    where = a.file;
    PlanTable plans = operationalize_all(p);
    Evaluator ev(p, plans);
    EvalOptions eo;
    eo.fuel = a.fuel;

    if (a.mode == "logical") {
      SolverConfig cfg = a.smt_solver.empty() ? default_solver_config() : solver_config_for(a.smt_solver);
      cfg.time_limit = a.smt_timeout;
      VerificationResult r = verify_logical(t, p, cfg, &ev);
      if (r.status == VerificationResult::Status::Verified) {
        std::cout << "verified\n";
        return kOk;
      }
      if (r.status == VerificationResult::Status::Refuted) {
        std::cout << "refuted";
        if (r.constraint >= 0) std::cout << " constraint " << r.constraint;
        if (!r.counterexample.empty()) std::cout << " counterexample " << show(r.counterexample);
        std::cout << "\n";
        return kRefuted;
      }
      std::cout << "inconclusive: " << r.reason << "\n";
      return kInconclusive;
    }

    SpecSummary spec = summarize_spec(p);
    ExampleResult r = ev.run_examples(t, spec.examples, eo);
    if (!r.pass) {
      std::cout << "refuted: example " << r.failing << " (constraint "
                << spec.example_of[r.failing] << "): " << r.reason << "\n";
      return kRefuted;
    }
    size_t undecided = 0;
    for (int i : spec.others) {
      if (!p.constraints[i].formula.free_vars().empty()) {
        ++undecided;
        continue;
      }
      Truth tr = check_instance(ev, t, p.constraints[i].formula, {}, eo);
      if (tr == Truth::False) {
        std::cout << "refuted: constraint " << i << "\n";
        return kRefuted;
      }
      if (tr == Truth::Unknown) ++undecided;
    }
    if (undecided) {
      std::cout << "inconclusive: " << spec.examples.size() << " examples pass, " << undecided
                << " constraints need --mode logical\n";
      return kInconclusive;
    }
    std::cout << "pass: " << spec.examples.size() << " examples\n";
    return kOk;
  } catch (const Error & e) {
    return report(where, e);
  }
}

struct TranslateArgs
{
  std::string file;
  std::string direction;
  std::string out;
};

int cmd_translate(const TranslateArgs & a)
{
  try {
    std::string dir = a.direction;
    if (dir.empty()) dir = is_sygus(a.file) ? "sygus2semgus" : "semgus2sygus";
    std::string text;
    if (dir == "sygus2semgus") {
      text = sygus_to_semgus_text(parse_sygus(read_file(a.file)));
      parse_problem(text);  // the output must be accepted by the analyzer
    } else {
      text = print_sygus(semgus_to_sygus(parse_problem(read_file(a.file))));
    }
    if (a.out.empty()) std::cout << text;
    else write_file(a.out, text);
    return kOk;
  } catch (const Error & e) {
    return report(a.file, e);
  }
}

// ---------------------------------------------------------------------------
// bench: every run happens in a forked child so that crashes, hangs and
// memory growth stay contained.

struct Run
{
  std::string status = "error";
  double seconds = 0;
  uint64_t candidates = 0;
  double evals_per_sec = 0;
  size_t cex = 0;
  std::string solution;
};

std::string bench_status(SolveResult::Status s)
{
  switch (s) {
    case SolveResult::Status::Solved: return "solved";
    case SolveResult::Status::Exhausted:
    case SolveResult::Status::Budget: return "exhausted";
    case SolveResult::Status::Timeout: return "timeout";
    case SolveResult::Status::Inconclusive: return "inconclusive";
    case SolveResult::Status::Memout: return "memout";
  }
  return "error";
}

Run run_isolated(const std::string & path, const SolveArgs & a)
{
  Run run;
  int fds[2];
  if (pipe(fds)) return run;
  auto t0 = std::chrono::steady_clock::now();
  pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    return run;
  }
  if (pid == 0) {
    close(fds[0]);
    nlohmann::json j;
    try {
      SynthesisProblem p = load_problem(path);
      SolveResult r = solve(p, solve_options(a));
      j = {{"status", bench_status(r.status)},
           {"seconds", r.seconds},
           {"candidates", r.candidates},
           {"evals_per_sec", r.seconds > 0 ? static_cast<double>(r.evaluations) / r.seconds : 0.0},
           {"cex", r.counterexamples},
           {"solution", r.solution ? format_solution(*r.solution, p) : ""}};
    } catch (const std::exception & e) {
      j = {{"status", "error"}, {"error", e.what()}};
    }
    std::string s = j.dump();
    for (size_t off = 0; off < s.size();) {
      ssize_t k = write(fds[1], s.data() + off, s.size() - off);
      if (k <= 0) break;
      off += static_cast<size_t>(k);
    }
    _exit(0);
  }
  close(fds[1]);

  // hard stop well after the solver's own deadline
  double limit = a.timeout > 0 ? a.timeout * 1.5 + 10 : -1;
  std::string buf;
  char chunk[4096];
  bool killed = false;
  for (;;) {
    int ms = -1;
    if (limit > 0) {
      double left = limit - std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (left <= 0) {
        kill(pid, SIGKILL);
        killed = true;
        break;
      }
      ms = static_cast<int>(left * 1000) + 1;
    }
    pollfd pfd{fds[0], POLLIN, 0};
    int r = poll(&pfd, 1, ms);
    if (r < 0 && errno == EINTR) continue;
    if (r <= 0) continue;
    ssize_t k = read(fds[0], chunk, sizeof chunk);
    if (k <= 0) break;
    buf.append(chunk, static_cast<size_t>(k));
  }
  close(fds[0]);
  int status = 0;
  waitpid(pid, &status, 0);
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (killed) {
    run.status = "timeout";
    return run;
  }
  if (WIFSIGNALED(status)) {
    std::cerr << path << ": solver process died with signal " << WTERMSIG(status) << "\n";
    return run;
  }
  try {
    auto j = nlohmann::json::parse(buf);
    run.status = j.at("status").get<std::string>();
    if (j.contains("error")) {
      std::cerr << path << ": " << j["error"].get<std::string>() << "\n";
      return run;
    }
    run.seconds = j.at("seconds").get<double>();
    run.candidates = j.at("candidates").get<uint64_t>();
    run.evals_per_sec = j.at("evals_per_sec").get<double>();
    run.cex = j.at("cex").get<size_t>();
    run.solution = j.at("solution").get<std::string>();
  } catch (const std::exception &) {
    run.status = "error";
  }
  return run;
}

std::string csv_field(const std::string & s)
{
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

struct BenchArgs
{
  std::string dir;
  std::vector<std::string> solvers{"top-down"};
  int repeat = 1;
  std::string out = "bench.csv";
  std::string cactus;
  SolveArgs solve;
};

int cmd_bench(const BenchArgs & a)
{
  std::vector<std::string> files;
  try {
    for (const auto & e : fs::directory_iterator(a.dir)) {
      auto ext = e.path().extension();
      if (e.is_regular_file() && (ext == ".sem" || ext == ".sl")) files.push_back(e.path().string());
    }
  } catch (const fs::filesystem_error & e) {
    return report(a.dir, Error(ErrorKind::IoError, e.what()));
  }
  std::sort(files.begin(), files.end());

  std::ostringstream csv, cactus;
  csv << "path,strategy,status,median_seconds,candidates,evals_per_sec,cex_count\r\n";
  for (const auto & solver : a.solvers) {
    SolveArgs sa = a.solve;
    sa.solver = solver;
    std::vector<double> solved_times;
    for (const auto & f : files) {
      std::vector<Run> runs;
      for (int k = 0; k < std::max(1, a.repeat); ++k) runs.push_back(run_isolated(f, sa));
      std::sort(runs.begin(), runs.end(),
                [](const Run & x, const Run & y) { return x.seconds < y.seconds; });
      const Run & m = runs[runs.size() / 2];
      // even counts: the median time is the mean of the middle two
      double median = runs.size() % 2 ? m.seconds
                                       : (runs[runs.size() / 2 - 1].seconds + m.seconds) / 2;
      std::ostringstream row;
      row.precision(6);
      row << std::fixed << csv_field(f) << "," << solver << "," << m.status << "," << median << ","
          << m.candidates << "," << m.evals_per_sec << "," << m.cex;
      csv << row.str() << "\r\n";
      std::cerr << f << " [" << solver << "] " << m.status << " " << median << " s";
      if (!m.solution.empty()) std::cerr << "  " << m.solution;
      std::cerr << "\n";
      if (m.status == "solved") solved_times.push_back(median);
    }
    std::sort(solved_times.begin(), solved_times.end());
    cactus << "# " << solver << "\n";
    for (size_t i = 0; i < solved_times.size(); ++i)
      cactus << (i + 1) << " " << solved_times[i] << "\n";
    cactus << "\n\n";
  }
  try {
    write_file(a.out, csv.str());
    std::string cpath = a.cactus.empty()
                            ? (fs::path(a.out).parent_path() / "cactus.dat").string()
                            : a.cactus;
    write_file(cpath, cactus.str());
  } catch (const Error & e) {
    return report(a.out, e);
  }
  return kOk;
}

void add_solve_flags(CLI::App * c, SolveArgs & a)
{
  c->add_option("--timeout", a.timeout, "Wall-clock limit in seconds (0 = none)")->check(CLI::NonNegativeNumber);
  c->add_option("--fuel", a.fuel, "Evaluation step budget per run")->check(CLI::PositiveNumber);
  c->add_option("--smt-solver", a.smt_solver, "SMT solver executable (default z3, or $SEMGUS_SMT_SOLVER)");
  c->add_option("--smt-timeout", a.smt_timeout, "Per-query SMT time limit in seconds")->check(CLI::PositiveNumber);
  c->add_flag("--strict-eval", a.strict, "Report nondeterministic semantics instead of taking the first match");
  c->add_option("--max-size", a.max_size, "Size (top-down) or level (bottom-up) bound");
  c->add_option("--max-candidates", a.max_candidates, "Candidate budget");
  c->add_option("--memory-mb", a.memory_mb, "Soft memory cap in MiB (0 = none)");
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"SemGuS toolkit: parse, solve, verify, translate and benchmark"};
  app.require_subcommand(1);
  const std::vector<std::string> strategies{"top-down", "bottom-up-size", "bottom-up-height"};

  ParseArgs pa;
  auto * parse = app.add_subcommand("parse", "Print the analyzed problem");
  parse->add_option("file", pa.file)->required();
  parse->add_option("--format", pa.format)->check(CLI::IsMember({"json", "sexpr"}));
  parse->add_flag("--dump-plans", pa.dump_plans, "Also print the evaluation plans");

  SolveArgs sa;
  auto * solve_cmd = app.add_subcommand("solve", "Synthesize a solution");
  solve_cmd->add_option("file", sa.file)->required();
  solve_cmd->add_option("--solver", sa.solver)->check(CLI::IsMember(strategies));
  add_solve_flags(solve_cmd, sa);
  solve_cmd->add_flag("--stats", sa.stats, "Print search statistics to stderr");

  VerifyArgs va;
  auto * verify = app.add_subcommand("verify", "Check a candidate against the constraints");
  verify->add_option("file", va.file)->required();
  verify->add_option("--candidate", va.candidate, "File holding the candidate term")->required();
  verify->add_option("--mode", va.mode)->check(CLI::IsMember({"examples", "logical"}));
  verify->add_option("--fuel", va.fuel)->check(CLI::PositiveNumber);
  verify->add_option("--smt-solver", va.smt_solver);
  verify->add_option("--smt-timeout", va.smt_timeout)->check(CLI::PositiveNumber);

  TranslateArgs ta;
  auto * translate = app.add_subcommand("translate", "Translate between SyGuS and SemGuS");
  translate->add_option("file", ta.file)->required();
  translate->add_option("--direction", ta.direction)
      ->check(CLI::IsMember({"sygus2semgus", "semgus2sygus"}));
  translate->add_option("--out", ta.out, "Output file (default stdout)");

  BenchArgs ba;
  ba.solve.timeout = 60;
  auto * bench = app.add_subcommand("bench", "Solve every problem in a directory");
  bench->add_option("dir", ba.dir)->required();
  bench->add_option("--solver", ba.solvers, "Strategies (repeatable)")
      ->check(CLI::IsMember(strategies))
      ->take_all();
  bench->add_option("--repeat", ba.repeat, "Runs per problem; the median time is reported")
      ->check(CLI::PositiveNumber);
  bench->add_option("--out", ba.out, "CSV report path");
  bench->add_option("--cactus", ba.cactus, "Cactus data path (default: next to the report)");
  add_solve_flags(bench, ba.solve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    app.exit(e);
    return kError;
  }

  if (*parse) return cmd_parse(pa);
  if (*solve_cmd) return cmd_solve(sa);
  if (*verify) return cmd_verify(va);
  if (*translate) return cmd_translate(ta);
  if (*bench) return cmd_bench(ba);
  return kError;
}
