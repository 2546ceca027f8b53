#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hcsp/bigstep.hpp"

namespace hcsp {

struct SmallConfig {
  ProcPtr p;
  State s;
};

struct SmallStepResult {
  std::optional<Event> ev;  // empty for tau
  SmallConfig next;
};

inline bool is_skip(const ProcPtr& p) { return p->kind == Process::Kind::Skip; }

// One small-step transition from c, nondeterminism resolved by the oracle.
// Returns nullopt when the configuration is terminal (skip).
inline std::optional<SmallStepResult> small_step(const SmallConfig& c, Oracle& oracle,
                                                 const ExecCfg& cfg = {}) {
  const ProcPtr& p = c.p;
  const State& s = c.s;
  auto tau = [&](ProcPtr next, State ns) -> SmallStepResult {
    return {std::nullopt, {std::move(next), std::move(ns)}};
  };
  switch (p->kind) {
    case Process::Kind::Skip: return std::nullopt;
    case Process::Kind::Assign: {
      State ns = s;
      ns[p->var] = eval_expr(p->expr, s);
      return tau(pskip(), std::move(ns));
    }
    case Process::Kind::Seq: {
      if (is_skip(p->p1)) return tau(p->p2, s);
      auto r = small_step({p->p1, s}, oracle, cfg);
      if (!r) return std::nullopt;
      return SmallStepResult{r->ev, {pseq(r->next.p, p->p2), r->next.s}};
    }
    case Process::Kind::Cond:
      return tau(eval_bexpr(p->cond, s) ? p->p1 : p->p2, s);
    case Process::Kind::IChoice:
      return tau(oracle.branch(2) == 0 ? p->p1 : p->p2, s);
    case Process::Kind::Rep: {
      if (!oracle.rep_continue()) return tau(pskip(), s);
      if (is_skip(p->p1)) return tau(p, s);
      auto r = small_step({p->p1, s}, oracle, cfg);
      if (!r) return std::nullopt;
      return SmallStepResult{r->ev, {pseq(r->next.p, p), r->next.s}};
    }
    case Process::Kind::Output: {
      double v = eval_expr(p->expr, s);
      RdySet rdy{{p->ch, Dir::Out}};
      CommDelay d = oracle.comm_delay(kInf);
      if (d.kind == CommDelay::Kind::Never)
        return SmallStepResult{wait_event(kInf, traj_const(s), rdy), {pskip(), s}};
      if (d.kind == CommDelay::Kind::After)
        return SmallStepResult{wait_event(d.d, traj_const(s), rdy), {p, s}};
      return SmallStepResult{comm_event(p->ch, Dir::Out, v), {pskip(), s}};
    }
    case Process::Kind::Input: {
      RdySet rdy{{p->ch, Dir::In}};
      CommDelay d = oracle.comm_delay(kInf);
      if (d.kind == CommDelay::Kind::Never)
        return SmallStepResult{wait_event(kInf, traj_const(s), rdy), {pskip(), s}};
      if (d.kind == CommDelay::Kind::After)
        return SmallStepResult{wait_event(d.d, traj_const(s), rdy), {p, s}};
      double v = oracle.input_value();
      State ns = s;
      ns[p->var] = v;
      return SmallStepResult{comm_event(p->ch, Dir::In, v), {pskip(), std::move(ns)}};
    }
    case Process::Kind::Wait: {
      double d = eval_expr(p->expr, s);
      if (d <= 0) return tau(pskip(), s);
      return SmallStepResult{wait_event(d, traj_const(s), {}), {pskip(), s}};
    }
    case Process::Kind::Ode: {
      if (!eval_bexpr(p->cond, s)) return tau(pskip(), s);
      auto bound = detect_boundary(p->ode, p->cond, s, cfg);
      double b = bound ? *bound : kInf;
      double d = oracle.ode_delay(b);
      if (d <= 0) d = b;
      TrajPtr traj = traj_ode(p->ode, s, cfg.ode_step);
      State ns = traj_eval(traj, d);
      return SmallStepResult{wait_event(d, traj, {}), {p, std::move(ns)}};
    }
    case Process::Kind::Interrupt: {
      if (!eval_bexpr(p->cond, s)) return tau(pskip(), s);
      auto bound = detect_boundary(p->ode, p->cond, s, cfg);
      double b = bound ? *bound : kInf;
      RdySet rdy = interrupt_rdy(*p);
      InterruptChoice ic = oracle.interrupt(b, p->branches.size());
      TrajPtr traj = traj_ode(p->ode, s, cfg.ode_step);
      if (ic.to_boundary || ic.t > 0) {
        double d = ic.to_boundary ? b : ic.t;
        if (std::isinf(d)) throw ExecError("interrupt delay unbounded");
        State ns = traj_eval(traj, d);
        return SmallStepResult{wait_event(d, traj, rdy), {p, std::move(ns)}};
      }
      const InterruptBranch& br = p->branches.at(ic.branch);
      if (br.guard.dir == Dir::Out)
        return SmallStepResult{comm_event(br.guard.ch, Dir::Out, eval_expr(br.guard.expr, s)),
                               {br.body, s}};
      double v = oracle.input_value();
      State ns = s;
      ns[br.guard.var] = v;
      return SmallStepResult{comm_event(br.guard.ch, Dir::In, v), {br.body, std::move(ns)}};
    }
    case Process::Kind::Parallel:
      throw ExecError("small_step: use the simulator for parallel configurations");
  }
  throw std::logic_error("small_step: bad kind");
}

struct RunResult {
  SmallConfig final;
  Trace trace;
  bool completed = false;
};

inline RunResult run_star(const ProcPtr& p, State s, Oracle& oracle, const ExecCfg& cfg = {},
                          size_t max_steps = 100000) {
  RunResult r;
  r.final = {p, std::move(s)};
  for (size_t i = 0; i < max_steps; ++i) {
    auto st = small_step(r.final, oracle, cfg);
    if (!st) {
      r.completed = is_skip(r.final.p);
      return r;
    }
    if (st->ev) r.trace.events.push_back(*st->ev);
    r.final = st->next;
  }
  return r;
}

namespace detail {

inline bool same_field(const OdeField& a, const OdeField& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i].first != b[i].first || !expr_equal(a[i].second, b[i].second)) return false;
  return true;
}

}  // namespace detail

// Joins adjacent wait events with equal ready sets whose trajectories meet:
// continuations of the same ODE (or constant) flow collapse to one event.
inline Trace reduce_trace(const Trace& tr, double tol = 1e-9) {
  Trace out;
  out.delta = tr.delta;
  for (const Event& e : tr.events) {
    if (e.kind == Event::Kind::Wait && !out.events.empty() &&
        out.events.back().kind == Event::Kind::Wait) {
      Event& last = out.events.back();
      if (last.rdy == e.rdy && !std::isinf(last.dur) &&
          state_close(traj_eval(last.traj, last.dur), traj_eval(e.traj, 0), tol)) {
        TrajPtr merged;
        const Trajectory &t1 = *last.traj, &t2 = *e.traj;
        if (t1.kind == Trajectory::Kind::Const && t2.kind == Trajectory::Kind::Const) {
          merged = last.traj;
        } else if (t1.kind == Trajectory::Kind::OdeSol && t2.kind == Trajectory::Kind::OdeSol &&
                   detail::same_field(t1.field, t2.field)) {
          merged = last.traj;
        } else {
          merged = traj_glued(last.traj, last.dur, e.traj);
        }
        last.dur = std::isinf(e.dur) ? kInf : last.dur + e.dur;
        last.traj = merged;
        continue;
      }
    }
    out.events.push_back(e);
  }
  return out;
}

// log rewrites between the big-step and small-step decision streams

inline std::vector<LogEntry> big_log_to_small(const std::vector<LogEntry>& big) {
  std::vector<LogEntry> out;
  for (const LogEntry& e : big) {
    switch (e.tag) {
      case LogEntry::Tag::CommDelay:
        if (!e.flag && e.value > 0) {
          out.push_back(e);  // wait first
          out.push_back({LogEntry::Tag::CommDelay, 0, false, 0});
        } else {
          out.push_back(e);
        }
        break;
      case LogEntry::Tag::Interrupt:
        if (!e.flag && e.value > 0) {
          out.push_back({LogEntry::Tag::Interrupt, 0, false, e.value});
          out.push_back({LogEntry::Tag::Interrupt, e.idx, false, 0});
        } else {
          out.push_back(e);
        }
        break;
      default: out.push_back(e);
    }
  }
  return out;
}

inline std::vector<LogEntry> small_log_to_big(const std::vector<LogEntry>& small) {
  std::vector<LogEntry> out;
  double comm_acc = 0, int_acc = 0;
  for (const LogEntry& e : small) {
    switch (e.tag) {
      case LogEntry::Tag::OdeDelay: break;
      case LogEntry::Tag::CommDelay:
        if (e.flag) {  // never: preceding partial waits collapse into it
          out.push_back(e);
          comm_acc = 0;
        } else if (e.value > 0) {
          comm_acc += e.value;
        } else {
          out.push_back({LogEntry::Tag::CommDelay, 0, false, comm_acc});
          comm_acc = 0;
        }
        break;
      case LogEntry::Tag::Interrupt:
        if (e.flag) {  // boundary exit
          out.push_back({LogEntry::Tag::Interrupt, 0, true, 0});
          int_acc = 0;
        } else if (e.value > 0) {
          int_acc += e.value;
        } else {
          out.push_back({LogEntry::Tag::Interrupt, e.idx, false, int_acc});
          int_acc = 0;
        }
        break;
      default: out.push_back(e);
    }
  }
  return out;
}

// Lenient replay for small-step runs driven from a big-step log: ODE delay
// queries have no big-step counterpart and default to the full boundary.
class SmallReplayOracle : public ReplayOracle {
 public:
  using ReplayOracle::ReplayOracle;

 protected:
  double choose_ode_delay(double bound) override { return bound; }
};

struct EquivReport {
  bool applicable = false;  // both runs completed
  bool ok = false;
  std::string detail;
};

// Runs p under the big-step semantics, replays the same decisions through
// the small-step semantics, and compares reduced traces; then does the same
// starting from a random small-step run.
inline EquivReport check_equivalence(const ProcPtr& p, const State& s0, uint64_t seed,
                                     const ExecCfg& cfg = {}, double tol = 1e-6,
                                     RandomOracleCfg ocfg = {}) {
  EquivReport rep;
  // big to small
  RandomOracle big_o(seed, ocfg);
  BigResult big;
  try {
    big = big_step(p, s0, big_o, cfg);
  } catch (const ExecError& e) {
    rep.detail = std::string("big-step run aborted: ") + e.what();
    return rep;
  }
  SmallReplayOracle small_o(big_log_to_small(big_o.log));
  RunResult small = run_star(p, s0, small_o, cfg);
  if (!small.completed) {
    rep.detail = "small-step replay did not terminate";
    return rep;
  }
  Trace small_red = reduce_trace(small.trace, cfg.tol);
  Trace big_red = reduce_trace(big.trace, cfg.tol);
  if (!trace_close(small_red, big_red, tol) || !state_close(small.final.s, big.state, tol)) {
    rep.applicable = true;
    rep.detail = "big->small mismatch: big " + trace_str(big_red) + " small " + trace_str(small_red);
    return rep;
  }
  // small to big
  RandomOracle so(seed ^ 0x9e3779b97f4a7c15ull, ocfg);
  RunResult rnd = run_star(p, s0, so, cfg);
  if (!rnd.completed) {
    rep.detail = "random small-step run did not terminate";
    return rep;
  }
  ReplayOracle bo(small_log_to_big(so.log));
  BigResult big2;
  try {
    big2 = big_step(p, s0, bo, cfg);
  } catch (const std::exception& e) {
    rep.applicable = true;
    rep.detail = std::string("small->big replay failed: ") + e.what();
    return rep;
  }
  Trace rnd_red = reduce_trace(rnd.trace, cfg.tol);
  Trace big2_red = reduce_trace(big2.trace, cfg.tol);
  if (!trace_close(rnd_red, big2_red, tol) || !state_close(rnd.final.s, big2.state, tol)) {
    rep.applicable = true;
    rep.detail =
        "small->big mismatch: small " + trace_str(rnd_red) + " big " + trace_str(big2_red);
    return rep;
  }
  rep.applicable = true;
  rep.ok = true;
  return rep;
}

}  // namespace hcsp
