#pragma once

#include <vector>

#include "hcsp/lie.hpp"
#include "hcsp/simulator.hpp"

namespace hcsp {

// ---------------------------------------------------------------------------
// Lunar lander: a plant flowing continuously, interrupted every period by a
// controller that reads velocity v and thrust-ratio w and sends a corrected
// thrust back.

constexpr double kLanderPeriod = 0.128;  // 16/125 s

inline ExprPtr lander_thrust(ExprPtr v, ExprPtr w) {
  // f(v,w) = -(w - 3.732) * 0.01 + 3.732 - (v + 1.5) * 0.6
  auto g = econst(rat(933, 250));  // 3.732
  return eadd(eneg(emul(esub(w, g), econst(rat(1, 100)))),
              esub(g, emul(eadd(v, econst(rat(3, 2))), econst(rat(3, 5)))));
}

inline ProcPtr lander_plant() {
  OdeField f{{"v", esub(evar("w"), econst(rat(933, 250)))},
             {"w", ediv(emul(evar("w"), evar("w")), econst(2500))},
             {"t", econst(1)}};
  auto exchange = pseq(std::vector<ProcPtr>{poutput("chw", evar("w")), pinput("chc", "w"),
                                            passign("t", econst(0))});
  return prep(pinterrupt(f, btrue(),
                         {{CommGuard{"chv", Dir::Out, "", evar("v")}, exchange}}));
}

// The controller binds into its own copies vc/wc so that the components
// share no variables.
inline ProcPtr lander_ctrl() {
  return prep(pseq(std::vector<ProcPtr>{
      pwait(econst(rat(16, 125))), pinput("chv", "vc"), pinput("chw", "wc"),
      poutput("chc", lander_thrust(evar("vc"), evar("wc")))}));
}

inline ProcPtr lander_model() {
  return pparallel(lander_plant(), {"chv", "chw", "chc"}, lander_ctrl());
}

inline State lander_init() {
  return State{{"v", -1.5}, {"w", 5670.0 / 1519.0}, {"t", 0}};
}

struct LanderReport {
  bool safe = true;
  double min_v = 0, max_v = 0;
  double viol_time = -1;  // first unsafe sample
  size_t samples = 0;
  Trace trace;
};

// Simulates the composed system for the given number of control periods and
// samples v along every wait trajectory against the strict band
// (-1.55, -1.45).
inline LanderReport lander_check(unsigned rounds, double rk4_step = 1e-3,
                                 State init = lander_init(), unsigned samples_per_wait = 64) {
  SimCfg cfg;
  cfg.ode_step = rk4_step;
  cfg.horizon = rounds * kLanderPeriod;
  SimResult r = simulate(lander_model(), init, 0, cfg);

  LanderReport rep;
  rep.min_v = rep.max_v = state_get(init, "v");
  double base = 0;
  for (auto& e : r.trace.events) {
    if (e.kind != Event::Kind::Wait) continue;
    for (unsigned k = 0; k <= samples_per_wait; ++k) {
      double tm = e.dur * k / samples_per_wait;
      double v = state_get(traj_eval(e.traj, tm), "v");
      ++rep.samples;
      rep.min_v = std::min(rep.min_v, v);
      rep.max_v = std::max(rep.max_v, v);
      if ((v <= -1.55 || v >= -1.45) && rep.safe) {
        rep.safe = false;
        rep.viol_time = base + tm;
      }
    }
    base += e.dur;
  }
  rep.trace = std::move(r.trace);
  return rep;
}

// ---------------------------------------------------------------------------
// Scheduler: two periodic task modules competing for the processor through
// a priority scheduler. Module states: WAIT = 0, READY = 1, RUN = 2.

struct SchedParams {
  double period1 = 3, cost1 = 1;
  int prior1 = 2;
  double period2 = 2, cost2 = 1;
  int prior2 = 1;
};

namespace detail {

// external choice between two communication branches, encoded as a
// domain-true interrupt with no continuous part
inline ProcPtr ext_choice(InterruptBranch a, InterruptBranch b) {
  return pinterrupt({}, btrue(), {std::move(a), std::move(b)});
}

inline ProcPtr sched_module(int i, double period, double cost, int prior) {
  std::string sfx = std::to_string(i);
  std::string st = "s" + sfx, T = "T" + sfx, C = "C" + sfx, ent = "ent" + sfx, x = "x" + sfx;
  std::string req = "req" + sfx, run = "run" + sfx, pr = "pr" + sfx, fre = "free" + sfx,
              ext = "exit" + sfx;
  auto within_period = bcmp(BExpr::Op::Lt, evar(T), econst(rat_from_double(period)));

  // WAIT: sit out the rest of the period, then become READY
  auto wait_br = pseq(std::vector<ProcPtr>{
      pode({{T, econst(1)}}, within_period), passign(T, econst(0)), passign(ent, econst(0)),
      passign(st, econst(1))});

  // READY: request, then wait for a run command until the period ends; on
  // timeout take whichever of run/exit is available
  auto ready_br = pseq(std::vector<ProcPtr>{
      poutput(req, econst(prior)),
      pinterrupt({{T, econst(1)}}, within_period,
                 {{CommGuard{run, Dir::In, x, nullptr}, passign(st, econst(2))}}),
      pcond(bcmp(BExpr::Op::Eq, evar(st), econst(1)),
            ext_choice({CommGuard{run, Dir::In, x, nullptr}, passign(st, econst(2))},
                       {CommGuard{ext, Dir::Out, "", econst(0)}, passign(st, econst(0))}),
            pskip())});

  // RUN: burn cost, preemptible at any time; on completion take whichever
  // of preempt/free is available
  auto run_dom = band(within_period, bcmp(BExpr::Op::Lt, evar(C), econst(rat_from_double(cost))));
  auto run_br = pseq(std::vector<ProcPtr>{
      pcond(bcmp(BExpr::Op::Eq, evar(ent), econst(0)),
            pseq(passign(C, econst(0)), passign(ent, econst(1))), pskip()),
      pinterrupt({{T, econst(1)}, {C, econst(1)}}, run_dom,
                 {{CommGuard{pr, Dir::In, x, nullptr}, passign(st, econst(1))}}),
      pcond(bcmp(BExpr::Op::Eq, evar(st), econst(2)),
            ext_choice({CommGuard{pr, Dir::In, x, nullptr}, passign(st, econst(0))},
                       {CommGuard{fre, Dir::Out, "", econst(0)}, passign(st, econst(0))}),
            pskip())});

  return prep(pcond(bcmp(BExpr::Op::Eq, evar(st), econst(0)), wait_br,
                    pcond(bcmp(BExpr::Op::Eq, evar(st), econst(1)), ready_br, run_br)));
}

// preempt whichever module is currently running
inline ProcPtr sched_preempt() {
  return pcond(bcmp(BExpr::Op::Eq, evar("ri"), econst(1)), poutput("pr1", econst(0)),
               pcond(bcmp(BExpr::Op::Eq, evar("ri"), econst(2)), poutput("pr2", econst(0)),
                     pskip()));
}

inline ProcPtr sched_req_handler(int i) {
  std::string sfx = std::to_string(i);
  // rp >= p: queue the request; otherwise preempt and grant
  return pcond(bcmp(BExpr::Op::Ge, evar("rp"), evar("p")),
               pseq(passign("li", econst(i)), passign("lp", evar("p"))),
               pseq(std::vector<ProcPtr>{sched_preempt(), poutput("run" + sfx, econst(0)),
                                         passign("ri", econst(i)), passign("rp", evar("p"))}));
}

inline ProcPtr sched_free_handler() {
  // pop the queued request if any, else go idle
  auto grant = pcond(bcmp(BExpr::Op::Eq, evar("ri"), econst(1)), poutput("run1", econst(0)),
                     poutput("run2", econst(0)));
  return pcond(bcmp(BExpr::Op::Ge, evar("li"), econst(0)),
               pseq(std::vector<ProcPtr>{passign("ri", evar("li")), passign("rp", evar("lp")),
                                         passign("li", econst(-1)), passign("lp", econst(-1)),
                                         grant}),
               pseq(passign("ri", econst(-1)), passign("rp", econst(-1))));
}

inline ProcPtr sched_exit_handler(int i) {
  return pcond(bcmp(BExpr::Op::Eq, evar("li"), econst(i)),
               pseq(passign("li", econst(-1)), passign("lp", econst(-1))), pskip());
}

}  // namespace detail

inline ProcPtr scheduler_proc() {
  using detail::sched_exit_handler;
  using detail::sched_free_handler;
  using detail::sched_req_handler;
  std::vector<InterruptBranch> brs;
  for (int i : {1, 2}) {
    std::string sfx = std::to_string(i);
    brs.push_back({CommGuard{"req" + sfx, Dir::In, "p", nullptr}, sched_req_handler(i)});
    brs.push_back({CommGuard{"free" + sfx, Dir::In, "g", nullptr}, sched_free_handler()});
    brs.push_back({CommGuard{"exit" + sfx, Dir::In, "g", nullptr}, sched_exit_handler(i)});
  }
  return prep(pinterrupt({}, btrue(), std::move(brs)));
}

inline ProcPtr scheduler_model(const SchedParams& pm = {}) {
  std::set<std::string> a1{"req1", "run1", "pr1", "free1", "exit1"};
  std::set<std::string> a2{"req2", "run2", "pr2", "free2", "exit2"};
  auto mod1 = detail::sched_module(1, pm.period1, pm.cost1, pm.prior1);
  auto mod2 = detail::sched_module(2, pm.period2, pm.cost2, pm.prior2);
  return pparallel(pparallel(scheduler_proc(), a1, mod1), a2, mod2);
}

inline State scheduler_init() {
  return State{{"s1", 0}, {"s2", 0}, {"T1", 0}, {"T2", 0}, {"C1", 0}, {"C2", 0},
               {"ent1", 0}, {"ent2", 0}, {"ri", -1}, {"rp", -1}, {"li", -1}, {"lp", -1}};
}

struct SchedReport {
  size_t double_run = 0;  // both modules in RUN at once
  size_t prio_viol = 0;   // a READY module outranks the running one
  size_t budget_viol = 0; // T or C exceeded its bound
  size_t ri_viol = 0;     // ri disagrees with who is running
  size_t checks = 0;      // quiescent states inspected
  size_t rounds_seen = 0; // module 1 WAIT -> READY transitions
  bool clean() const { return double_run + prio_viol + budget_viol + ri_viol == 0; }
};

// Simulates the scheduler system and checks the safety properties at every
// quiescent point: mutual exclusion, priority order, clock budgets, and
// that ri names exactly the running module.
inline SchedReport scheduler_check(unsigned rounds, const std::vector<uint64_t>& seeds,
                                   const SchedParams& pm = {}) {
  SchedReport rep;
  for (uint64_t seed : seeds) {
    SimCfg cfg;
    cfg.horizon = (rounds + 1) * std::max(pm.period1, pm.period2);
    double prev_s1 = 0;
    size_t rounds_this = 0;
    cfg.on_quiescent = [&](double, const State& s) {
      ++rep.checks;
      double s1 = state_get(s, "s1"), s2 = state_get(s, "s2");
      double ri = state_get(s, "ri");
      if (s1 == 2 && s2 == 2) ++rep.double_run;
      if (s1 == 2 && s2 == 1 && pm.prior2 > pm.prior1) ++rep.prio_viol;
      if (s2 == 2 && s1 == 1 && pm.prior1 > pm.prior2) ++rep.prio_viol;
      const double tol = 1e-9;
      if (state_get(s, "T1") > pm.period1 + tol || state_get(s, "C1") > pm.cost1 + tol ||
          state_get(s, "T2") > pm.period2 + tol || state_get(s, "C2") > pm.cost2 + tol)
        ++rep.budget_viol;
      if ((s1 == 2) != (ri == 1)) ++rep.ri_viol;
      if ((s2 == 2) != (ri == 2)) ++rep.ri_viol;
      if (prev_s1 == 0 && s1 != 0) ++rounds_this;
      prev_s1 = s1;
    };
    simulate(scheduler_model(pm), scheduler_init(), seed, cfg);
    rep.rounds_seen = std::max(rep.rounds_seen, rounds_this);
  }
  return rep;
}

}  // namespace hcsp
