#pragma once

#include <functional>
#include <random>
#include <vector>

#include "hcsp/bigstep.hpp"

namespace hcsp {

// Whole-system simulator for parallel compositions under maximal progress:
// internal actions and enabled communications fire before time passes, and
// time advances by the largest step every component can take together.

struct SimCfg {
  double horizon = 1e4;      // simulated-time cap
  size_t max_steps = 100000;  // discrete-action cap
  double ode_step = 1e-3;
  double p_rep_stop = 0;  // chance a repetition exits at each unrolling
  std::function<void(double, const State&)> on_state;  // after every action
  // called when no internal action or communication is pending (just before
  // time passes and on termination): the stable points for invariant checks
  std::function<void(double, const State&)> on_quiescent;
};

enum class SimStatus { Done, Blocked, StepCap, TimeCap };

struct SimResult {
  Trace trace;
  State state;
  double time = 0;
  SimStatus status = SimStatus::Done;
};

namespace detail {

struct SimThread {
  ProcPtr p;
  State s;                       // this component's variables only
  std::vector<const Process*> path;  // parallel ancestors, root first
};

struct CommOffer {
  std::string ch;
  Dir dir;
};

struct Offer {
  bool done = false;
  bool tau = false;     // deterministic internal action
  bool choice = false;  // ichoice / repetition decision
  std::vector<CommOffer> comms;
  bool can_delay = false;
  double cap = kInf;  // largest permitted delay
  TrajPtr traj;
  RdySet rdy;
};

inline void flatten(const ProcPtr& p, std::vector<const Process*>& path,
                    std::vector<SimThread>& out, const State& init) {
  if (p->kind == Process::Kind::Parallel) {
    path.push_back(p.get());
    flatten(p->p1, path, out, init);
    flatten(p->p2, path, out, init);
    path.pop_back();
    return;
  }
  SimThread t;
  t.p = p;
  for (auto& x : proc_vars(p)) t.s[x] = state_get(init, x);
  t.path = path;
  out.push_back(std::move(t));
}

// a communication may cross from one component up to its ancestor `top`
// only if no parallel node below `top` already claims the channel
inline bool scope_clear(const std::vector<const Process*>& path, size_t top,
                        const std::string& ch) {
  for (size_t i = top + 1; i < path.size(); ++i)
    if (path[i]->cs.count(ch)) return false;
  return true;
}

inline Offer probe(const SimThread& t, const ExecCfg& xcfg) {
  const ProcPtr& p = t.p;
  Offer o;
  switch (p->kind) {
    case Process::Kind::Skip:
      o.done = true;
      o.can_delay = true;
      o.traj = traj_const(t.s);
      return o;
    case Process::Kind::Assign:
    case Process::Kind::Cond:
      o.tau = true;
      return o;
    case Process::Kind::IChoice:
    case Process::Kind::Rep:
      o.choice = true;
      return o;
    case Process::Kind::Wait: {
      double d = eval_expr(p->expr, t.s);
      if (d <= 0) {
        o.tau = true;
      } else {
        o.can_delay = true;
        o.cap = d;
        o.traj = traj_const(t.s);
      }
      return o;
    }
    case Process::Kind::Input:
      o.comms.push_back({p->ch, Dir::In});
      o.can_delay = true;
      o.traj = traj_const(t.s);
      o.rdy = {{p->ch, Dir::In}};
      return o;
    case Process::Kind::Output:
      o.comms.push_back({p->ch, Dir::Out});
      o.can_delay = true;
      o.traj = traj_const(t.s);
      o.rdy = {{p->ch, Dir::Out}};
      return o;
    case Process::Kind::Ode:
    case Process::Kind::Interrupt: {
      if (!eval_bexpr(p->cond, t.s)) {
        o.tau = true;
        return o;
      }
      o.can_delay = true;
      if (p->cond->kind == BExpr::Kind::True) {
        o.cap = kInf;
      } else {
        auto b = detect_boundary(p->ode, p->cond, t.s, xcfg);
        o.cap = b ? *b : kInf;
      }
      o.traj = traj_ode(p->ode, t.s, xcfg.ode_step);
      if (p->kind == Process::Kind::Interrupt)
        for (auto& br : p->branches) {
          o.comms.push_back({br.guard.ch, br.guard.dir});
          o.rdy.insert({br.guard.ch, br.guard.dir});
        }
      return o;
    }
    case Process::Kind::Seq: {
      SimThread head{p->p1, t.s, {}};
      Offer inner = probe(head, xcfg);
      if (inner.done) {
        Offer r;
        r.tau = true;  // structural: drop the finished prefix
        return r;
      }
      return inner;
    }
    case Process::Kind::Parallel: throw ExecError("simulate: nested parallel in component");
  }
  throw ExecError("simulate: bad kind");
}

inline ProcPtr exec_tau(const ProcPtr& p, State& s, std::mt19937_64& rng, const SimCfg& cfg) {
  switch (p->kind) {
    case Process::Kind::Assign: s[p->var] = eval_expr(p->expr, s); return pskip();
    case Process::Kind::Cond: return eval_bexpr(p->cond, s) ? p->p1 : p->p2;
    case Process::Kind::IChoice:
      return std::bernoulli_distribution(0.5)(rng) ? p->p1 : p->p2;
    case Process::Kind::Rep:
      if (cfg.p_rep_stop > 0 && std::bernoulli_distribution(cfg.p_rep_stop)(rng))
        return pskip();
      return pseq(p->p1, p);
    case Process::Kind::Wait:
    case Process::Kind::Ode:
    case Process::Kind::Interrupt: return pskip();
    case Process::Kind::Seq:
      if (p->p1->kind == Process::Kind::Skip) return p->p2;
      return pseq(exec_tau(p->p1, s, rng, cfg), p->p2);
    default: throw ExecError("simulate: no internal action here");
  }
}

// performs the communication at the head; for outputs fills `value` first,
// for inputs consumes it
inline ProcPtr exec_comm(const ProcPtr& p, State& s, const std::string& ch, Dir dir,
                         double& value) {
  switch (p->kind) {
    case Process::Kind::Output:
      value = eval_expr(p->expr, s);
      return pskip();
    case Process::Kind::Input:
      s[p->var] = value;
      return pskip();
    case Process::Kind::Interrupt:
      for (auto& br : p->branches) {
        if (br.guard.ch != ch || br.guard.dir != dir) continue;
        if (dir == Dir::Out)
          value = eval_expr(br.guard.expr, s);
        else
          s[br.guard.var] = value;
        return br.body;
      }
      throw ExecError("simulate: no matching interrupt branch");
    case Process::Kind::Seq: return pseq(exec_comm(p->p1, s, ch, dir, value), p->p2);
    default: throw ExecError("simulate: no communication here");
  }
}

inline ProcPtr advance(const ProcPtr& p, State& s, double d, const ExecCfg& xcfg) {
  switch (p->kind) {
    case Process::Kind::Skip:
    case Process::Kind::Input:
    case Process::Kind::Output: return p;
    case Process::Kind::Wait: {
      double rem = eval_expr(p->expr, s) - d;
      return pwait(econst(rat_from_double(rem)));
    }
    case Process::Kind::Ode:
    case Process::Kind::Interrupt: {
      State next = traj_eval(traj_ode(p->ode, s, xcfg.ode_step), d);
      for (auto& [x, v] : next) s[x] = v;
      return p;
    }
    case Process::Kind::Seq: return pseq(advance(p->p1, s, d, xcfg), p->p2);
    default: throw ExecError("simulate: cannot let time pass here");
  }
}

}  // namespace detail

inline SimResult simulate(const ProcPtr& sys, const State& init, uint64_t seed,
                          const SimCfg& cfg = {}) {
  using namespace detail;
  ExecCfg xcfg;
  xcfg.ode_step = cfg.ode_step;
  std::mt19937_64 rng(seed);
  std::vector<const Process*> path;
  std::vector<SimThread> th;
  flatten(sys, path, th, init);

  SimResult res;
  auto merged = [&] {
    State s;
    for (auto& t : th)
      for (auto& [x, v] : t.s) s[x] = v;
    return s;
  };
  auto notify = [&] {
    if (cfg.on_state) cfg.on_state(res.time, merged());
  };

  for (size_t step = 0; step < cfg.max_steps; ++step) {
    if (res.time >= cfg.horizon) {
      res.status = SimStatus::TimeCap;
      res.state = merged();
      return res;
    }
    std::vector<Offer> of;
    of.reserve(th.size());
    for (auto& t : th) of.push_back(probe(t, xcfg));

    // 1. deterministic internal actions
    bool acted = false;
    for (size_t i = 0; i < th.size() && !acted; ++i)
      if (of[i].tau) {
        th[i].p = exec_tau(th[i].p, th[i].s, rng, cfg);
        acted = true;
      }
    if (acted) {
      notify();
      continue;
    }

    // 2. matched communications
    struct Pair {
      size_t out, in;
      std::string ch;
    };
    std::vector<Pair> pairs;
    for (size_t i = 0; i < th.size(); ++i)
      for (size_t j = i + 1; j < th.size(); ++j) {
        // deepest common parallel ancestor
        size_t k = 0;
        while (k < th[i].path.size() && k < th[j].path.size() &&
               th[i].path[k] == th[j].path[k])
          ++k;
        if (k == 0) continue;
        const Process* lca = th[i].path[k - 1];
        for (auto& ci : of[i].comms)
          for (auto& cj : of[j].comms) {
            if (ci.ch != cj.ch || ci.dir == cj.dir) continue;
            if (!lca->cs.count(ci.ch)) continue;
            if (!scope_clear(th[i].path, k - 1, ci.ch) ||
                !scope_clear(th[j].path, k - 1, ci.ch))
              continue;
            size_t o = ci.dir == Dir::Out ? i : j;
            pairs.push_back({o, o == i ? j : i, ci.ch});
          }
      }
    if (!pairs.empty()) {
      auto& pr = pairs[std::uniform_int_distribution<size_t>(0, pairs.size() - 1)(rng)];
      double v = 0;
      th[pr.out].p = exec_comm(th[pr.out].p, th[pr.out].s, pr.ch, Dir::Out, v);
      th[pr.in].p = exec_comm(th[pr.in].p, th[pr.in].s, pr.ch, Dir::In, v);
      res.trace.events.push_back(comm_event(pr.ch, Dir::Sync, v));
      notify();
      continue;
    }

    // 3. internal choices
    for (size_t i = 0; i < th.size() && !acted; ++i)
      if (of[i].choice) {
        th[i].p = exec_tau(th[i].p, th[i].s, rng, cfg);
        acted = true;
      }
    if (acted) {
      notify();
      continue;
    }

    // 4. let time pass together
    bool all_done = true;
    double d = kInf;
    for (auto& o : of) {
      all_done = all_done && o.done;
      if (!o.can_delay) throw ExecError("simulate: component stuck without offers");
      d = std::min(d, o.cap);
    }
    if (cfg.on_quiescent) cfg.on_quiescent(res.time, merged());
    if (all_done) {
      res.status = SimStatus::Done;
      res.state = merged();
      return res;
    }
    TrajPtr traj;
    RdySet rdy;
    for (auto& o : of) {
      traj = traj ? traj_merge(traj, o.traj) : o.traj;
      rdy = rdy_union(rdy, o.rdy);
    }
    if (d == kInf) {
      // nobody can move and nobody imposes a deadline: blocked forever
      res.trace.events.push_back(wait_event(kInf, traj, rdy));
      res.status = SimStatus::Blocked;
      res.state = merged();
      return res;
    }
    d = std::min(d, cfg.horizon - res.time);
    res.trace.events.push_back(wait_event(d, traj, rdy));
    for (auto& t : th) t.p = advance(t.p, t.s, d, xcfg);
    res.time += d;
    notify();
  }
  res.status = SimStatus::StepCap;
  res.state = merged();
  return res;
}

}  // namespace hcsp
