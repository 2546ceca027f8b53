#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hcsp/oracle.hpp"
#include "hcsp/process.hpp"
#include "hcsp/sync.hpp"
#include "hcsp/trace.hpp"

namespace hcsp {

struct ExecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExecCfg {
  size_t rep_bound = 32;
  double ode_step = 1e-3;
  double bisect_tol = 1e-9;
  double horizon = 1e4;
  size_t sync_cap = 10000;
  double tol = 1e-9;
};

// First time in (0, horizon] where the domain constraint fails along the
// flow, refined by bisection. nullopt when the domain holds out to horizon.
inline std::optional<double> detect_boundary(const OdeField& field, const BExprPtr& dom,
                                             const State& s0, const ExecCfg& cfg = {}) {
  TrajPtr p = traj_ode(field, s0, cfg.ode_step);
  double lo = 0;
  double hi = cfg.ode_step;
  bool found = false;
  while (hi <= cfg.horizon + cfg.ode_step) {
    if (!eval_bexpr(dom, traj_eval(p, hi))) {
      found = true;
      break;
    }
    lo = hi;
    hi += cfg.ode_step;
  }
  if (!found) return std::nullopt;
  while (hi - lo > cfg.bisect_tol) {
    double mid = (lo + hi) / 2;
    if (eval_bexpr(dom, traj_eval(p, mid))) lo = mid;
    else hi = mid;
  }
  return hi;
}

inline RdySet interrupt_rdy(const Process& p) {
  RdySet rdy;
  for (auto& br : p.branches) rdy.insert({br.guard.ch, br.guard.dir});
  return rdy;
}

namespace detail {

struct BigRunner {
  Oracle& oracle;
  const ExecCfg& cfg;

  // Executes p from s, appending events to tr. Returns false when the run
  // ended in deadlock (delta already recorded on tr).
  bool run(const ProcPtr& p, State& s, Trace& tr) {
    switch (p->kind) {
      case Process::Kind::Skip: return true;
      case Process::Kind::Assign:
        s[p->var] = eval_expr(p->expr, s);
        return true;
      case Process::Kind::Output: {
        double v = eval_expr(p->expr, s);
        CommDelay d = oracle.comm_delay(kInf);
        RdySet rdy{{p->ch, Dir::Out}};
        if (d.kind == CommDelay::Kind::Never) {
          tr.events.push_back(wait_event(kInf, traj_const(s), rdy));
          return true;
        }
        if (d.kind == CommDelay::Kind::After)
          tr.events.push_back(wait_event(d.d, traj_const(s), rdy));
        tr.events.push_back(comm_event(p->ch, Dir::Out, v));
        return true;
      }
      case Process::Kind::Input: {
        CommDelay d = oracle.comm_delay(kInf);
        RdySet rdy{{p->ch, Dir::In}};
        if (d.kind == CommDelay::Kind::Never) {
          tr.events.push_back(wait_event(kInf, traj_const(s), rdy));
          return true;
        }
        if (d.kind == CommDelay::Kind::After)
          tr.events.push_back(wait_event(d.d, traj_const(s), rdy));
        double v = oracle.input_value();
        s[p->var] = v;
        tr.events.push_back(comm_event(p->ch, Dir::In, v));
        return true;
      }
      case Process::Kind::Seq:
        return run(p->p1, s, tr) && run(p->p2, s, tr);
      case Process::Kind::Cond:
        return run(eval_bexpr(p->cond, s) ? p->p1 : p->p2, s, tr);
      case Process::Kind::IChoice:
        return run(oracle.branch(2) == 0 ? p->p1 : p->p2, s, tr);
      case Process::Kind::Rep: {
        size_t count = 0;
        while (oracle.rep_continue()) {
          if (++count > cfg.rep_bound) throw ExecError("rep bound exceeded");
          if (!run(p->p1, s, tr)) return false;
        }
        return true;
      }
      case Process::Kind::Wait: {
        double d = eval_expr(p->expr, s);
        if (d > 0) tr.events.push_back(wait_event(d, traj_const(s), {}));
        return true;
      }
      case Process::Kind::Ode: {
        if (!eval_bexpr(p->cond, s)) return true;
        auto d = detect_boundary(p->ode, p->cond, s, cfg);
        if (!d) throw ExecError("ODE domain still holds at horizon");
        TrajPtr traj = traj_ode(p->ode, s, cfg.ode_step);
        s = traj_eval(traj, *d);
        tr.events.push_back(wait_event(*d, traj, {}));
        return true;
      }
      case Process::Kind::Interrupt: {
        if (!eval_bexpr(p->cond, s)) return true;
        auto bound = detect_boundary(p->ode, p->cond, s, cfg);
        double b = bound ? *bound : kInf;
        RdySet rdy = interrupt_rdy(*p);
        InterruptChoice c = oracle.interrupt(b, p->branches.size());
        TrajPtr traj = traj_ode(p->ode, s, cfg.ode_step);
        if (c.to_boundary) {
          if (!bound) throw ExecError("interrupt boundary requested but domain never exits");
          s = traj_eval(traj, b);
          tr.events.push_back(wait_event(b, traj, rdy));
          return true;
        }
        if (c.t > 0) {
          s = traj_eval(traj, c.t);
          tr.events.push_back(wait_event(c.t, traj, rdy));
        }
        const InterruptBranch& br = p->branches.at(c.branch);
        if (br.guard.dir == Dir::Out) {
          tr.events.push_back(comm_event(br.guard.ch, Dir::Out, eval_expr(br.guard.expr, s)));
        } else {
          double v = oracle.input_value();
          s[br.guard.var] = v;
          tr.events.push_back(comm_event(br.guard.ch, Dir::In, v));
        }
        return run(br.body, s, tr);
      }
      case Process::Kind::Parallel: {
        State s1, s2;
        auto v1 = proc_vars(p->p1);
        for (auto& [x, v] : s) (v1.count(x) ? s1 : s2)[x] = v;
        Trace t1, t2;
        bool ok1 = run(p->p1, s1, t1);
        if (!ok1) t1.delta = true;
        bool ok2 = run(p->p2, s2, t2);
        if (!ok2) t2.delta = true;
        auto synced = sync_traces(t1, p->cs, t2, cfg.sync_cap, cfg.tol);
        size_t pick = synced.size() == 1 ? 0 : oracle.branch(synced.size());
        const Trace& chosen = synced[pick];
        s = s1;
        for (auto& [x, v] : s2) s[x] = v;
        tr.events.insert(tr.events.end(), chosen.events.begin(), chosen.events.end());
        if (chosen.delta) {
          tr.delta = true;
          return false;
        }
        return true;
      }
    }
    throw std::logic_error("big_step: bad kind");
  }
};

}  // namespace detail

struct BigResult {
  State state;
  Trace trace;
};

inline BigResult big_step(const ProcPtr& p, State s, Oracle& oracle, const ExecCfg& cfg = {}) {
  detail::BigRunner r{oracle, cfg};
  Trace tr;
  r.run(p, s, tr);
  return {std::move(s), std::move(tr)};
}

// Exhaustive big-step enumeration for discrete processes: inputs range over
// a finite value domain, communications happen immediately, repetitions are
// cut off at rep_bound.
inline void enumerate_runs(const ProcPtr& p, const State& s, const Trace& tr,
                           const std::vector<double>& domain, size_t rep_bound,
                           std::vector<BigResult>& out) {
  switch (p->kind) {
    case Process::Kind::Skip:
      out.push_back({s, tr});
      return;
    case Process::Kind::Assign: {
      State s2 = s;
      s2[p->var] = eval_expr(p->expr, s);
      out.push_back({std::move(s2), tr});
      return;
    }
    case Process::Kind::Output: {
      Trace t2 = tr;
      t2.events.push_back(comm_event(p->ch, Dir::Out, eval_expr(p->expr, s)));
      out.push_back({s, std::move(t2)});
      return;
    }
    case Process::Kind::Input: {
      for (double v : domain) {
        State s2 = s;
        s2[p->var] = v;
        Trace t2 = tr;
        t2.events.push_back(comm_event(p->ch, Dir::In, v));
        out.push_back({std::move(s2), std::move(t2)});
      }
      return;
    }
    case Process::Kind::Seq: {
      std::vector<BigResult> mid;
      enumerate_runs(p->p1, s, tr, domain, rep_bound, mid);
      for (auto& m : mid) enumerate_runs(p->p2, m.state, m.trace, domain, rep_bound, out);
      return;
    }
    case Process::Kind::Cond:
      enumerate_runs(eval_bexpr(p->cond, s) ? p->p1 : p->p2, s, tr, domain, rep_bound, out);
      return;
    case Process::Kind::IChoice:
      enumerate_runs(p->p1, s, tr, domain, rep_bound, out);
      enumerate_runs(p->p2, s, tr, domain, rep_bound, out);
      return;
    case Process::Kind::Rep: {
      out.push_back({s, tr});
      if (rep_bound == 0) return;
      std::vector<BigResult> mid;
      enumerate_runs(p->p1, s, tr, domain, rep_bound, mid);
      for (auto& m : mid) {
        std::vector<BigResult> rest;
        enumerate_runs(p, m.state, m.trace, domain, rep_bound - 1, rest);
        for (auto& r : rest) out.push_back(std::move(r));
      }
      return;
    }
    default:
      throw ExecError("enumerate_runs: continuous or parallel construct not supported");
  }
}

inline std::vector<BigResult> enumerate_runs(const ProcPtr& p, const State& s,
                                             const std::vector<double>& domain,
                                             size_t rep_bound = 3) {
  std::vector<BigResult> out;
  enumerate_runs(p, s, {}, domain, rep_bound, out);
  return out;
}

}  // namespace hcsp
