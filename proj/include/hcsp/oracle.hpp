#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "hcsp/trace.hpp"

namespace hcsp {

// One resolved scheduling decision. Logs of these make runs replayable.
struct LogEntry {
  enum class Tag { Branch, RepCont, InputVal, CommDelay, Interrupt, OdeDelay };
  Tag tag;
  size_t idx = 0;       // Branch; Interrupt branch
  bool flag = false;    // RepCont; Interrupt to_boundary; CommDelay never
  double value = 0;     // InputVal; CommDelay/Interrupt/OdeDelay duration
};

struct CommDelay {
  enum class Kind { Now, After, Never };
  Kind kind = Kind::Now;
  double d = 0;
};

struct InterruptChoice {
  bool to_boundary = false;
  double t = 0;       // fire time, 0 for immediate
  size_t branch = 0;  // fired branch index
};

// Resolves all nondeterminism in the semantics. The public wrappers record
// every decision, so any run can be replayed bit for bit from the log.
class Oracle {
 public:
  virtual ~Oracle() = default;

  size_t branch(size_t n) {
    size_t i = choose_branch(n);
    log.push_back({LogEntry::Tag::Branch, i, false, 0});
    return i;
  }
  bool rep_continue() {
    bool b = choose_rep_continue();
    log.push_back({LogEntry::Tag::RepCont, 0, b, 0});
    return b;
  }
  double input_value() {
    double v = choose_input_value();
    log.push_back({LogEntry::Tag::InputVal, 0, false, v});
    return v;
  }
  CommDelay comm_delay(double max_d) {
    CommDelay c = choose_comm_delay(max_d);
    LogEntry e{LogEntry::Tag::CommDelay, 0, false, 0};
    if (c.kind == CommDelay::Kind::Never) e.flag = true;
    else e.value = c.kind == CommDelay::Kind::Now ? 0 : c.d;
    log.push_back(e);
    return c;
  }
  InterruptChoice interrupt(double bound, size_t nbranches) {
    InterruptChoice c = choose_interrupt(bound, nbranches);
    log.push_back({LogEntry::Tag::Interrupt, c.branch, c.to_boundary, c.t});
    return c;
  }
  double ode_delay(double bound) {
    double d = choose_ode_delay(bound);
    log.push_back({LogEntry::Tag::OdeDelay, 0, false, d});
    return d;
  }

  std::vector<LogEntry> log;

 protected:
  virtual size_t choose_branch(size_t n) = 0;
  virtual bool choose_rep_continue() = 0;
  virtual double choose_input_value() = 0;
  virtual CommDelay choose_comm_delay(double max_d) = 0;
  virtual InterruptChoice choose_interrupt(double bound, size_t nbranches) = 0;
  virtual double choose_ode_delay(double bound) = 0;
};

struct RandomOracleCfg {
  std::vector<double> value_domain;  // empty: uniform on value_range
  std::pair<double, double> value_range{-10, 10};
  double p_rep_continue = 0.5;
  size_t max_reps = 32;
  double p_delay_now = 0.6;
  double p_delay_never = 0.1;
  double max_delay = 2.0;
  double p_boundary = 0.5;  // interrupt: run to boundary when possible
};

class RandomOracle : public Oracle {
 public:
  explicit RandomOracle(uint64_t seed = 0, RandomOracleCfg cfg = {})
      : rng_(seed), cfg_(std::move(cfg)) {}

 protected:
  size_t choose_branch(size_t n) override {
    return std::uniform_int_distribution<size_t>(0, n - 1)(rng_);
  }
  bool choose_rep_continue() override {
    if (reps_done_ >= cfg_.max_reps) return false;
    bool b = std::bernoulli_distribution(cfg_.p_rep_continue)(rng_);
    if (b) ++reps_done_;
    return b;
  }
  double choose_input_value() override {
    if (!cfg_.value_domain.empty()) {
      size_t i = std::uniform_int_distribution<size_t>(0, cfg_.value_domain.size() - 1)(rng_);
      return cfg_.value_domain[i];
    }
    return std::uniform_real_distribution<double>(cfg_.value_range.first,
                                                  cfg_.value_range.second)(rng_);
  }
  CommDelay choose_comm_delay(double max_d) override {
    double u = std::uniform_real_distribution<double>(0, 1)(rng_);
    if (u < cfg_.p_delay_now) return {CommDelay::Kind::Now, 0};
    if (u < cfg_.p_delay_now + cfg_.p_delay_never) return {CommDelay::Kind::Never, 0};
    double cap = std::min(max_d, cfg_.max_delay);
    double d = std::uniform_real_distribution<double>(0, cap)(rng_);
    if (d <= 0) return {CommDelay::Kind::Now, 0};
    return {CommDelay::Kind::After, d};
  }
  InterruptChoice choose_interrupt(double bound, size_t nbranches) override {
    bool finite = !std::isinf(bound);
    if (finite && std::bernoulli_distribution(cfg_.p_boundary)(rng_)) return {true, bound, 0};
    double cap = finite ? bound : cfg_.max_delay;
    double t = std::bernoulli_distribution(0.5)(rng_)
                   ? 0
                   : std::uniform_real_distribution<double>(0, cap)(rng_);
    size_t i = std::uniform_int_distribution<size_t>(0, nbranches - 1)(rng_);
    return {false, t, i};
  }
  double choose_ode_delay(double bound) override {
    double cap = std::isinf(bound) ? cfg_.max_delay : bound;
    if (std::bernoulli_distribution(0.7)(rng_)) return cap;
    return std::uniform_real_distribution<double>(0, cap)(rng_);
  }

 private:
  std::mt19937_64 rng_;
  RandomOracleCfg cfg_;
  size_t reps_done_ = 0;
};

// Replays a recorded log; every query must match the recorded tag.
class ReplayOracle : public Oracle {
 public:
  explicit ReplayOracle(std::vector<LogEntry> entries) : entries_(std::move(entries)) {}

  bool exhausted() const { return pos_ >= entries_.size(); }

 protected:
  const LogEntry& next(LogEntry::Tag tag) {
    if (pos_ >= entries_.size()) throw std::runtime_error("replay log exhausted");
    const LogEntry& e = entries_[pos_++];
    if (e.tag != tag) throw std::runtime_error("replay log tag mismatch");
    return e;
  }
  size_t choose_branch(size_t) override { return next(LogEntry::Tag::Branch).idx; }
  bool choose_rep_continue() override { return next(LogEntry::Tag::RepCont).flag; }
  double choose_input_value() override { return next(LogEntry::Tag::InputVal).value; }
  CommDelay choose_comm_delay(double) override {
    const LogEntry& e = next(LogEntry::Tag::CommDelay);
    if (e.flag) return {CommDelay::Kind::Never, 0};
    if (e.value == 0) return {CommDelay::Kind::Now, 0};
    return {CommDelay::Kind::After, e.value};
  }
  InterruptChoice choose_interrupt(double, size_t) override {
    const LogEntry& e = next(LogEntry::Tag::Interrupt);
    return {e.flag, e.value, e.idx};
  }
  double choose_ode_delay(double) override { return next(LogEntry::Tag::OdeDelay).value; }

 private:
  std::vector<LogEntry> entries_;
  size_t pos_ = 0;
};

}  // namespace hcsp
