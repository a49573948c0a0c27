#include <gtest/gtest.h>

#include <filesystem>

#include <json.hpp>
#include "support.hpp"

using testing_support::cli;
using testing_support::corpus;
using testing_support::run;
using testing_support::slurp;
using testing_support::spit;

namespace fs = std::filesystem;

namespace {

struct TempDir
{
  fs::path path;
  TempDir()
  {
    static int n = 0;
    path = fs::temp_directory_path() / ("semgus_cli_" + std::to_string(getpid()) + "_" + std::to_string(n++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string & name) const { return (path / name).string(); }
};

std::string q(const std::string & s) { return "'" + s + "'"; }

size_t lines(const std::string & s)
{
  size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

// rows end in CRLF, as RFC 4180 asks
const char * kHeader = "path,strategy,status,median_seconds,candidates,evals_per_sec,cex_count";

}  // namespace

TEST(Parse, JsonEvents)
{
  auto r = run(cli() + " parse --format json " + q(corpus("semgus/mul.sem")));
  ASSERT_EQ(r.code, 0) << r.err;
  auto doc = nlohmann::json::parse(r.out);
  ASSERT_TRUE(doc.is_array());
  ASSERT_FALSE(doc.empty());
  EXPECT_TRUE(doc[0].contains("$version"));
  size_t chcs = 0;
  for (const auto & ev : doc)
    if (ev.value("$event", "") == "chc") ++chcs;
  EXPECT_EQ(chcs, 16u);
}

TEST(Parse, SexprFormat)
{
  auto r = run(cli() + " parse --format sexpr " + q(corpus("semgus/poly.sem")));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("(term-type E "), std::string::npos);
}

TEST(Parse, EmptyFile)
{
  TempDir d;
  spit(d / "empty.sem", "");
  auto r = run(cli() + " parse " + q(d / "empty.sem"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("AbsentSynthTarget"), std::string::npos) << r.err;
}

TEST(Parse, LocatedSyntaxError)
{
  TempDir d;
  spit(d / "extra.sem", "(set-logic LIA)\n(check-synth))\n");
  auto r = run(cli() + " parse " + q(d / "extra.sem"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find(d / "extra.sem" + ":2:14:"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("UnbalancedParens"), std::string::npos) << r.err;
}

TEST(Parse, MissingFile)
{
  auto r = run(cli() + " parse /nonexistent/file.sem");
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());
}

TEST(Solve, TimeoutExitCode)
{
  auto r = run(cli() + " solve --timeout 0.001 " + q(corpus("semgus/mul.sem")));
  EXPECT_EQ(r.code, 3) << r.err;
  EXPECT_FALSE(r.signaled);
}

TEST(Solve, UnsatExhausts)
{
  auto r = run(cli() + " solve " + q(corpus("semgus/unsat.sem")));
  EXPECT_EQ(r.code, 2) << r.out << r.err;
}

TEST(Solve, SolutionReverifies)
{
  TempDir d;
  for (const char * s : {"top-down", "bottom-up-size", "bottom-up-height"}) {
    auto r = run(cli() + " solve --solver " + s + " " + q(corpus("semgus/poly.sem")));
    ASSERT_EQ(r.code, 0) << s << r.err;
    EXPECT_NE(r.out.find("(define-fun f () E"), std::string::npos) << r.out;
    spit(d / "sol.txt", r.out);
    auto v = run(cli() + " verify --mode examples --candidate " + q(d / "sol.txt") + " " +
                 q(corpus("semgus/poly.sem")));
    EXPECT_EQ(v.code, 0) << v.out << v.err;
  }
}

TEST(Solve, SygusInput)
{
  auto r = run(cli() + " solve " + q(corpus("sygus/ident.sl")));
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST(Verify, LoopSolution)
{
  TempDir d;
  spit(d / "mul.txt", testing_support::kMulSolution);
  auto r = run(cli() + " verify --candidate " + q(d / "mul.txt") + " " + q(corpus("semgus/mul.sem")));
  EXPECT_EQ(r.code, 0) << r.out << r.err;
}

TEST(Verify, TrivialRefuted)
{
  TempDir d;
  spit(d / "r.txt", "($function $noop $r)");
  auto r = run(cli() + " verify --mode examples --candidate " + q(d / "r.txt") + " " +
               q(corpus("semgus/mul.sem")));
  EXPECT_EQ(r.code, 5);
  EXPECT_NE(r.out.find("example 1"), std::string::npos) << r.out;
}

TEST(Verify, HoleIsIncomplete)
{
  TempDir d;
  spit(d / "h.txt", "($function $noop ??)");
  auto r = run(cli() + " verify --candidate " + q(d / "h.txt") + " " + q(corpus("semgus/mul.sem")));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("IncompleteTerm"), std::string::npos) << r.err;
}

TEST(Translate, SygusOutputParses)
{
  TempDir d;
  for (const auto & e : fs::directory_iterator(corpus("sygus"))) {
    std::string out = d / (e.path().stem().string() + ".sem");
    auto t = run(cli() + " translate --direction sygus2semgus --out " + q(out) + " " + q(e.path()));
    ASSERT_EQ(t.code, 0) << e.path() << t.err;
    auto p = run(cli() + " parse " + q(out));
    EXPECT_EQ(p.code, 0) << e.path() << p.err;
  }
}

TEST(Translate, RoundTripThroughFiles)
{
  TempDir d;
  std::string src = corpus("sygus/max2.sl");
  auto a = run(cli() + " translate --direction sygus2semgus --out " + q(d / "m.sem") + " " + q(src));
  ASSERT_EQ(a.code, 0) << a.err;
  auto b = run(cli() + " translate --direction semgus2sygus --out " + q(d / "m.sl") + " " + q(d / "m.sem"));
  ASSERT_EQ(b.code, 0) << b.err;
  auto c = run(cli() + " translate --direction sygus2semgus " + q(d / "m.sl"));
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(c.out, slurp(d / "m.sem"));
}

TEST(Translate, MulNotInFragment)
{
  auto r = run(cli() + " translate --direction semgus2sygus " + q(corpus("semgus/mul.sem")));
  EXPECT_EQ(r.code, 6);
  EXPECT_NE(r.err.find("NotInFragment"), std::string::npos) << r.err;
}

TEST(Bench, EmptyDirectory)
{
  TempDir d;
  fs::create_directories(d / "in");
  auto r = run(cli() + " bench --out " + q(d / "r.csv") + " " + q(d / "in"));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(d / "r.csv"), std::string(kHeader) + "\r\n");
}

TEST(Bench, Corpus)
{
  TempDir d;
  auto r = run(cli() + " bench --timeout 5 --out " + q(d / "r.csv") + " " + q(corpus("semgus")));
  EXPECT_EQ(r.code, 0) << r.err;
  std::string csv = slurp(d / "r.csv");
  EXPECT_EQ(csv.substr(0, csv.find("\r\n")), kHeader);
  EXPECT_EQ(lines(csv), 16u) << csv;
  EXPECT_NE(csv.find("mul.sem,top-down,timeout"), std::string::npos) << csv;
  EXPECT_NE(csv.find("unsat.sem,top-down,exhausted"), std::string::npos) << csv;
  EXPECT_TRUE(fs::exists(d / "cactus.dat"));
}

TEST(Bench, RepeatAndStrategies)
{
  TempDir d;
  fs::create_directories(d / "in");
  fs::copy_file(corpus("semgus/poly.sem"), d / "in/poly.sem");
  fs::copy_file(corpus("semgus/max2.sem"), d / "in/max2.sem");
  spit(d / "in/broken.sem", "(synth-fun");
  auto r = run(cli() + " bench --repeat 3 --solver top-down --solver bottom-up-size --out " +
               q(d / "r.csv") + " " + q(d / "in"));
  EXPECT_EQ(r.code, 0) << r.err;
  std::string csv = slurp(d / "r.csv");
  EXPECT_EQ(lines(csv), 7u) << csv;
  EXPECT_NE(csv.find("poly.sem,bottom-up-size,solved"), std::string::npos) << csv;
  EXPECT_NE(csv.find("broken.sem,top-down,error"), std::string::npos) << csv;
}
