#pragma once

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "semgus/problem.hpp"

namespace testing_support {

inline std::string source_dir() { return SEMGUS_SOURCE_DIR; }
inline std::string corpus(const std::string & rel) { return source_dir() + "/benchmarks/" + rel; }

inline std::string slurp(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::string & path, const std::string & text)
{
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline semgus::SynthesisProblem load(const std::string & rel)
{
  return semgus::parse_problem(slurp(corpus(rel)));
}

// The known loop solution for mul: r += x, y times.
inline const char * kMulSolution =
    "($function ($while ($< $0 $y) ($seq ($y<- ($- $y $1)) ($r<- ($+ $r $x)))) $r)";

struct Run
{
  int code = -1;
  bool signaled = false;
  std::string out, err;
};

// Runs a shell command line, capturing stdout and stderr separately.
inline Run run(const std::string & cmd)
{
  static int counter = 0;
  std::string errfile = "/tmp/semgus_test_err_" + std::to_string(getpid()) + "_" +
                        std::to_string(counter++);
  Run r;
  FILE * p = popen((cmd + " 2>" + errfile).c_str(), "r");
  if (!p) return r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.err = slurp(errfile);
  std::remove(errfile.c_str());
  // the shell reports a signal-killed child as 128+N
  if (WIFEXITED(status)) {
    r.code = WEXITSTATUS(status);
    r.signaled = r.code > 128;
  } else {
    r.signaled = true;
  }
  return r;
}

inline std::string cli() { return SEMGUS_CLI; }

}  // namespace testing_support
