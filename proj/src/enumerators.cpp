#include "semgus/enumerators.hpp"

#include <unistd.h>

#include <fstream>
#include <unordered_set>

namespace semgus {

std::string_view to_string(StreamEnd e)
{
  switch (e) {
    case StreamEnd::Running: return "running";
    case StreamEnd::Exhausted: return "exhausted";
    case StreamEnd::Budget: return "budget";
    case StreamEnd::Timeout: return "timeout";
    case StreamEnd::Memout: return "memout";
  }
  return "?";
}

size_t resident_mb()
{
  std::ifstream f("/proc/self/statm");
  size_t pages = 0, resident = 0;
  if (!(f >> pages >> resident)) return 0;
  return resident * static_cast<size_t>(sysconf(_SC_PAGESIZE)) / (1024 * 1024);
}

namespace {

int leftmost_hole(const ProgramTerm & t)
{
  if (t.is_hole()) return t.nonterminal();
  for (const auto & c : t.children())
    if (!c.complete()) return leftmost_hole(c);
  return -1;
}

// periodic limit checks shared by both enumerators
StreamEnd check_limits(const EnumLimits & l, uint64_t tick)
{
  if (l.deadline && (tick & 255) == 0 && std::chrono::steady_clock::now() >= *l.deadline)
    return StreamEnd::Timeout;
  if (l.memory_mb && (tick & 4095) == 0 && resident_mb() > l.memory_mb)
    return StreamEnd::Memout;
  return StreamEnd::Running;
}

}  // namespace

// ---------------------------------------------------------------------------

TopDownEnumerator::TopDownEnumerator(const Grammar & g, int start, EnumLimits limits)
    : g_(g), limits_(limits)
{
  push(ProgramTerm::hole(start));
}

void TopDownEnumerator::push(ProgramTerm t)
{
  uint32_t key = t.size() + t.hole_count();
  if (limits_.max_size && key > limits_.max_size) {
    pruned_ = true;
    return;
  }
  heap_.push({key, seq_++, std::move(t)});
}

std::optional<ProgramTerm> TopDownEnumerator::next()
{
  if (end_ != StreamEnd::Running) return std::nullopt;
  if (limits_.max_candidates && yielded_ >= limits_.max_candidates) {
    end_ = StreamEnd::Budget;
    return std::nullopt;
  }
  while (!heap_.empty()) {
    if (auto e = check_limits(limits_, expanded_++); e != StreamEnd::Running) {
      end_ = e;
      return std::nullopt;
    }
    ProgramTerm t = heap_.top().term;
    heap_.pop();
    if (t.complete()) {
      ++yielded_;
      return t;
    }
    int nt = leftmost_hole(t);
    for (const auto & prod : g_.nonterminals[nt].productions) {
      std::vector<ProgramTerm> kids;
      kids.reserve(prod.children.size());
      for (int c : prod.children) kids.push_back(ProgramTerm::hole(c));
      push(t.fill_leftmost(ProgramTerm::node(prod.constructor, std::move(kids))));
    }
  }
  end_ = pruned_ ? StreamEnd::Budget : StreamEnd::Exhausted;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

const std::vector<ProgramTerm> & ProgramBank::at(int nonterminal, uint32_t level) const
{
  static const std::vector<ProgramTerm> none;
  auto it = terms_.find({nonterminal, level});
  return it == terms_.end() ? none : it->second;
}

void ProgramBank::add(int nonterminal, uint32_t level, ProgramTerm t)
{
  terms_[{nonterminal, level}].push_back(std::move(t));
  ++total_;
}

size_t ProgramBank::level_count(uint32_t level) const
{
  size_t n = 0;
  for (const auto & [k, v] : terms_)
    if (k.second == level) n += v.size();
  return n;
}

BankHook dedup_hook()
{
  // keyed by structure only: the same term offered under two nonterminals is
  // kept once
  auto seen = std::make_shared<std::unordered_set<ProgramTerm, TermHash>>();
  return [seen](const ProgramBank &, const ProgramTerm & t, uint32_t) {
    return seen->insert(t).second;
  };
}

BankHook height_limit_hook(uint32_t max_height)
{
  return [max_height](const ProgramBank &, const ProgramTerm & t, uint32_t) {
    return t.height() <= max_height;
  };
}

BankHook reject_all_hook()
{
  return [](const ProgramBank &, const ProgramTerm &, uint32_t) { return false; };
}

BottomUpEnumerator::BottomUpEnumerator(const Grammar & g, int start, BankMetric metric,
                                       HookChain hooks, EnumLimits limits)
    : g_(g), start_(start), hooks_(std::move(hooks)), limits_(limits), bank_(metric)
{
  for (const auto & nt : g_.nonterminals)
    for (const auto & p : nt.productions) max_arity_ = std::max(max_arity_, p.children.size());
}

bool BottomUpEnumerator::start_level()
{
  if (level_ > 0 && bank_.level_count(level_) > 0) last_nonempty_ = level_;
  uint32_t n = level_ + 1;
  if (n > 1) {
    bool done = bank_.metric() == BankMetric::Height
                    ? bank_.level_count(level_) == 0
                    : n - 1 > max_arity_ * last_nonempty_;
    if (done) {
      end_ = StreamEnd::Exhausted;
      return false;
    }
  }
  if (limits_.max_size && n > limits_.max_size) {
    end_ = StreamEnd::Budget;
    return false;
  }
  level_ = n;
  jobs_.clear();
  job_ = 0;
  job_live_ = false;

  const bool by_size = bank_.metric() == BankMetric::Size;
  for (size_t nt = 0; nt < g_.nonterminals.size(); ++nt) {
    const auto & prods = g_.nonterminals[nt].productions;
    for (size_t pi = 0; pi < prods.size(); ++pi) {
      size_t a = prods[pi].children.size();
      if (a == 0) {
        if (n == 1) jobs_.push_back({static_cast<int>(nt), static_cast<int>(pi), {}});
        continue;
      }
      if (n == 1) continue;
      // child level tuples: sum n-1 (size) or max n-1 (height), lexicographic
      std::vector<uint32_t> cur(a, 1);
      std::function<void(size_t, uint32_t, bool)> gen = [&](size_t i, uint32_t used, bool hit) {
        if (i == a) {
          if (by_size ? used == n - 1 : hit)
            jobs_.push_back({static_cast<int>(nt), static_cast<int>(pi), cur});
          return;
        }
        uint32_t rest = static_cast<uint32_t>(a - i - 1);
        for (uint32_t l = 1; l <= n - 1; ++l) {
          if (by_size && used + l + rest > n - 1) break;
          cur[i] = l;
          gen(i + 1, used + l, hit || l == n - 1);
        }
      };
      gen(0, 0, false);
    }
  }
  return true;
}

bool BottomUpEnumerator::next_job()
{
  for (; job_ < jobs_.size(); ++job_) {
    const Job & j = jobs_[job_];
    const auto & kids = g_.nonterminals[j.nonterminal].productions[j.production].children;
    bool ready = true;
    for (size_t i = 0; i < kids.size(); ++i)
      if (bank_.count(kids[i], j.levels[i]) == 0) ready = false;
    if (ready) {
      odo_.assign(kids.size(), 0);
      job_live_ = true;
      return true;
    }
  }
  return false;
}

std::optional<ProgramTerm> BottomUpEnumerator::next()
{
  while (end_ == StreamEnd::Running) {
    if (limits_.max_candidates && yielded_ >= limits_.max_candidates) {
      end_ = StreamEnd::Budget;
      break;
    }
    if (!job_live_ && !next_job()) {
      if (!start_level()) break;
      continue;
    }
    const Job & j = jobs_[job_];
    const Production & prod = g_.nonterminals[j.nonterminal].productions[j.production];
    std::vector<ProgramTerm> kids;
    kids.reserve(prod.children.size());
    for (size_t i = 0; i < prod.children.size(); ++i)
      kids.push_back(bank_.at(prod.children[i], j.levels[i])[odo_[i]]);
    ProgramTerm t = ProgramTerm::node(prod.constructor, std::move(kids));

    // advance the odometer, last child fastest
    bool wrapped = true;
    for (size_t i = odo_.size(); i-- > 0;) {
      if (++odo_[i] < bank_.count(prod.children[i], j.levels[i])) {
        wrapped = false;
        break;
      }
      odo_[i] = 0;
    }
    if (wrapped) {
      job_live_ = false;
      ++job_;
    }

    if (auto e = check_limits(limits_, built_++); e != StreamEnd::Running) {
      end_ = e;
      break;
    }
    if (!hooks_.admit(bank_, t, level_)) continue;
    int nt = j.nonterminal;
    bank_.add(nt, level_, t);
    if (nt == start_) {
      ++yielded_;
      return t;
    }
  }
  return std::nullopt;
}

}  // namespace semgus
