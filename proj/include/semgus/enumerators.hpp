#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <vector>

#include "semgus/term.hpp"

namespace semgus {

struct EnumLimits
{
  uint64_t max_candidates = 0;  // yielded terms; 0 = unlimited
  uint32_t max_size = 0;        // top-down: size + holes; bottom-up: level. 0 = unlimited
  size_t memory_mb = 0;         // soft cap on resident memory; 0 = none
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

enum class StreamEnd
{
  Running,
  Exhausted,  // every term was produced
  Budget,     // stopped by max_candidates / max_size
  Timeout,
  Memout
};

std::string_view to_string(StreamEnd e);

/// A single-consumer stream of complete terms.
class TermStream
{
 public:
  virtual ~TermStream() = default;
  virtual std::optional<ProgramTerm> next() = 0;
  StreamEnd end() const { return end_; }
  uint64_t yielded() const { return yielded_; }

 protected:
  StreamEnd end_ = StreamEnd::Running;
  uint64_t yielded_ = 0;
};

/// Resident set size of this process in MiB (0 if unknown).
size_t resident_mb();

// ---------------------------------------------------------------------------
// Top-down

/// Best-first search over partial programs: priority (size + holes, FIFO),
/// expanding the leftmost hole by every production of its nonterminal.
class TopDownEnumerator : public TermStream
{
 public:
  TopDownEnumerator(const Grammar & g, int start, EnumLimits limits = {});
  std::optional<ProgramTerm> next() override;

  size_t queue_size() const { return heap_.size(); }
  uint64_t expanded() const { return expanded_; }

 private:
  struct Item
  {
    uint32_t key;
    uint64_t seq;
    ProgramTerm term;
    bool operator>(const Item & o) const
    {
      return key != o.key ? key > o.key : seq > o.seq;
    }
  };
  void push(ProgramTerm t);

  const Grammar & g_;
  EnumLimits limits_;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap_;
  uint64_t seq_ = 0;
  uint64_t expanded_ = 0;
  bool pruned_ = false;
};

// ---------------------------------------------------------------------------
// Bottom-up

enum class BankMetric
{
  Size,
  Height
};

/// Complete terms grouped by (nonterminal, metric value).
class ProgramBank
{
 public:
  explicit ProgramBank(BankMetric m) : metric_(m) {}

  BankMetric metric() const { return metric_; }
  const std::vector<ProgramTerm> & at(int nonterminal, uint32_t level) const;
  void add(int nonterminal, uint32_t level, ProgramTerm t);
  size_t count(int nonterminal, uint32_t level) const { return at(nonterminal, level).size(); }
  size_t level_count(uint32_t level) const;  // over all nonterminals
  size_t total() const { return total_; }

 private:
  BankMetric metric_;
  std::map<std::pair<int, uint32_t>, std::vector<ProgramTerm>> terms_;
  size_t total_ = 0;
};

/// Called before a term enters the bank; false rejects it (it is neither
/// stored nor yielded).
using BankHook = std::function<bool(const ProgramBank &, const ProgramTerm &, uint32_t level)>;

/// Hooks applied in registration order; the first rejection wins.
class HookChain
{
 public:
  void register_hook(BankHook h) { hooks_.push_back(std::move(h)); }
  bool admit(const ProgramBank & b, const ProgramTerm & t, uint32_t level) const
  {
    for (const auto & h : hooks_)
      if (!h(b, t, level)) return false;
    return true;
  }
  bool empty() const { return hooks_.empty(); }

 private:
  std::vector<BankHook> hooks_;
};

BankHook dedup_hook();  // rejects structurally equal terms seen before
BankHook height_limit_hook(uint32_t max_height);
BankHook reject_all_hook();

/// Lazy bottom-up enumeration by size or height. Terms of the start
/// nonterminal are yielded as soon as they are constructed.
class BottomUpEnumerator : public TermStream
{
 public:
  BottomUpEnumerator(const Grammar & g, int start, BankMetric metric,
                     HookChain hooks = {}, EnumLimits limits = {});
  std::optional<ProgramTerm> next() override;

  const ProgramBank & bank() const { return bank_; }
  uint32_t level() const { return level_; }

 private:
  struct Job
  {
    int nonterminal;
    int production;
    std::vector<uint32_t> levels;  // one per child
  };
  bool start_level();
  bool next_job();

  const Grammar & g_;
  int start_;
  HookChain hooks_;
  EnumLimits limits_;
  ProgramBank bank_;
  size_t max_arity_ = 0;
  uint32_t level_ = 0;
  uint32_t last_nonempty_ = 0;
  std::vector<Job> jobs_;
  size_t job_ = 0;
  std::vector<size_t> odo_;  // odometer over the current job's child lists
  bool job_live_ = false;
  uint64_t built_ = 0;
};

}  // namespace semgus
