#pragma once

// Weakest liberal preconditions over (state, trace) pairs, strongest
// postcondition for parallel composition, Hoare-triple checking, and VC
// emission.

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hcsp/assertion.hpp"
#include "hcsp/bigstep.hpp"
#include "hcsp/process.hpp"

namespace hcsp {

struct WpError : std::runtime_error {
  explicit WpError(const std::string& m) : std::runtime_error(m) {}
};

struct WpCfg {
  // Full mirrors the semantics (immediate, delayed and unmatched-forever
  // communication). NowOnly keeps just the immediate conjunct, matching the
  // discrete enumeration used as exactness oracle.
  enum class CommMode { Full, NowOnly };
  CommMode comm_mode = CommMode::Full;
  size_t rep_bound = 8;                       // unrolling depth for unannotated loops
  std::map<size_t, AssnPtr> rep_invariants;   // pre-order repetition index -> invariant
  std::set<std::string> statevars;            // defaults to proc_vars(p)
};

struct WpResult {
  AssnPtr pre;
  std::vector<AssnPtr> side_vcs;  // invariant obligations, in discovery order
};

namespace detail {

class WpGen {
 public:
  WpGen(WpCfg cfg, std::set<std::string> statevars)
      : cfg_(std::move(cfg)), statevars_(std::move(statevars)) {}

  AssnPtr go(const ProcPtr& p, const AssnPtr& q) {
    switch (p->kind) {
      case Process::Kind::Skip: return q;
      case Process::Kind::Assign: return subst_var(q, p->var, p->expr);
      case Process::Kind::Output: return wp_output(p, q);
      case Process::Kind::Input: return wp_input(p, q);
      case Process::Kind::Seq: return go(p->p1, go(p->p2, q));
      case Process::Kind::Cond: {
        AssnPtr b = assn_of_bexpr(p->cond);
        return aand(aimplies(b, go(p->p1, q)), aimplies(anot(b), go(p->p2, q)));
      }
      case Process::Kind::IChoice: return aand(go(p->p1, q), go(p->p2, q));
      case Process::Kind::Rep: return wp_rep(p, q);
      case Process::Kind::Ode: return wp_ode(p, q);
      case Process::Kind::Interrupt: return wp_interrupt(p, q);
      case Process::Kind::Wait: return wp_wait(p, q);
      case Process::Kind::Parallel:
        throw WpError("wp requires a sequential process");
    }
    throw WpError("bad process kind");
  }

  std::vector<AssnPtr> take_vcs() { return std::move(vcs_); }

 private:
  WpCfg cfg_;
  std::set<std::string> statevars_;
  std::vector<AssnPtr> vcs_;
  size_t rep_idx_ = 0;
  size_t fresh_ = 0;

  std::string fresh(const char* base) { return std::string("$") + base + std::to_string(++fresh_); }

  TrajTermPtr id_traj() const { return tid_traj(statevars_); }

  // Q[gamma ^ t / gamma]
  static AssnPtr append_gamma(const AssnPtr& q, TraceTermPtr t) {
    return subst_gamma(q, tconcat(tgamma(), std::move(t)));
  }

  AssnPtr wp_output(const ProcPtr& p, const AssnPtr& q) {
    VTermPtr e = vterm_of_expr(p->expr);
    AssnPtr now = append_gamma(q, tcomm(p->ch, Dir::Out, e));
    if (cfg_.comm_mode == WpCfg::CommMode::NowOnly) return now;
    RdySet rdy{{p->ch, Dir::Out}};
    std::string d = fresh("d");
    AssnPtr delayed = aforall_time(
        d, vconst(0ll),
        append_gamma(q, tconcat(twait(vname(d), id_traj(), rdy), tcomm(p->ch, Dir::Out, e))));
    AssnPtr forever = append_gamma(q, twait(vinf(), id_traj(), rdy));
    return aand(now, aand(delayed, forever));
  }

  AssnPtr wp_input(const ProcPtr& p, const AssnPtr& q) {
    std::string v = fresh("v");
    AssnPtr qv = subst_var(q, p->var, vname(v));
    AssnPtr now = aforall_val(v, append_gamma(qv, tcomm(p->ch, Dir::In, vname(v))));
    if (cfg_.comm_mode == WpCfg::CommMode::NowOnly) return now;
    RdySet rdy{{p->ch, Dir::In}};
    std::string d = fresh("d");
    AssnPtr delayed = aforall_time(
        d, vconst(0ll),
        aforall_val(v, append_gamma(qv, tconcat(twait(vname(d), id_traj(), rdy),
                                                tcomm(p->ch, Dir::In, vname(v))))));
    AssnPtr forever = append_gamma(q, twait(vinf(), id_traj(), rdy));
    return aand(now, aand(delayed, forever));
  }

  AssnPtr wp_rep(const ProcPtr& p, const AssnPtr& q) {
    size_t idx = rep_idx_++;
    auto it = cfg_.rep_invariants.find(idx);
    if (it != cfg_.rep_invariants.end()) {
      const AssnPtr& inv = it->second;
      vcs_.push_back(aimplies(inv, go(p->p1, inv)));
      vcs_.push_back(aimplies(inv, q));
      return inv;
    }
    // Bounded unrolling: runs of up to rep_bound iterations must satisfy q.
    // The k-th unrolling pass gives nested repetitions a budget of k, matching
    // the shrinking budget of the run enumeration.
    AssnPtr w = q;
    size_t save = rep_idx_;
    size_t save_bound = cfg_.rep_bound;
    for (size_t k = 1; k <= save_bound; ++k) {
      rep_idx_ = save;
      cfg_.rep_bound = k;
      w = aand(q, go(p->p1, w));
    }
    cfg_.rep_bound = save_bound;
    return w;
  }

  // B with the ODE variables replaced by trajectory lookups at time t.
  AssnPtr at_time(const BExprPtr& b, const TrajTermPtr& traj, const VTermPtr& t,
                  const OdeField& field) const {
    VSubst m;
    for (auto& [x, _] : field) m[x] = vtrajat(traj, t, x);
    return subst_vars(assn_of_bexpr(b), m);
  }

  VSubst flow_subst(const TrajTermPtr& traj, const VTermPtr& t, const OdeField& field) const {
    VSubst m;
    for (auto& [x, _] : field) m[x] = vtrajat(traj, t, x);
    return m;
  }

  TrajTermPtr flow_traj(const ProcPtr& p) const {
    std::map<std::string, VTermPtr> init;
    for (auto& x : statevars_) init[x] = vname(x);
    return tode_traj(p->ode, std::move(init));
  }

  AssnPtr wp_ode(const ProcPtr& p, const AssnPtr& q) {
    TrajTermPtr traj = flow_traj(p);
    AssnPtr exit_now = aimplies(anot(assn_of_bexpr(p->cond)), q);
    std::string d = fresh("d");
    std::string t = fresh("t");
    AssnPtr in_domain = aforall_range(t, vconst(0ll), false, vname(d), true,
                                      at_time(p->cond, traj, vname(t), p->ode));
    AssnPtr out_at_d = anot(at_time(p->cond, traj, vname(d), p->ode));
    AssnPtr q_at_d = append_gamma(subst_vars(q, flow_subst(traj, vname(d), p->ode)),
                                  twait(vname(d), traj, {}));
    AssnPtr run = with_hint(
        aforall_time(d, vconst(0ll), aimplies(aand(in_domain, out_at_d), q_at_d)), traj, p->cond);
    return aand(exit_now, run);
  }

  AssnPtr wp_wait(const ProcPtr& p, const AssnPtr& q) {
    VTermPtr e = vterm_of_expr(p->expr);
    AssnPtr waited = append_gamma(q, twait(e, id_traj(), {}));
    return aand(aimplies(acmp(BExpr::Op::Gt, e, vconst(0ll)), waited),
                aimplies(acmp(BExpr::Op::Le, e, vconst(0ll)), q));
  }

  AssnPtr wp_interrupt(const ProcPtr& p, const AssnPtr& q) {
    TrajTermPtr traj = flow_traj(p);
    RdySet rdy;
    for (auto& br : p->branches) rdy.insert({br.guard.ch, br.guard.dir});
    std::vector<AssnPtr> conj;

    for (auto& br : p->branches) {
      AssnPtr qi = go(br.body, q);
      std::string d = fresh("d");
      AssnPtr in_domain = [&] {
        std::string t = fresh("t");
        return aforall_range(t, vconst(0ll), false, vname(d), true,
                             at_time(p->cond, traj, vname(t), p->ode));
      }();
      TraceTermPtr wait_tt = twait(vname(d), traj, rdy);
      if (br.guard.dir == Dir::Out) {
        VTermPtr e = vterm_of_expr(br.guard.expr);
        conj.push_back(append_gamma(qi, tcomm(br.guard.ch, Dir::Out, e)));
        VSubst flow = flow_subst(traj, vname(d), p->ode);
        AssnPtr fired = subst_vars(qi, flow);
        fired = append_gamma(
            fired, tconcat(wait_tt, tcomm(br.guard.ch, Dir::Out, subst_vterm(e, flow))));
        conj.push_back(with_hint(aforall_time(d, vconst(0ll), aimplies(in_domain, fired)),
                                 traj, p->cond));
      } else {
        std::string v = fresh("v");
        AssnPtr qv = subst_var(qi, br.guard.var, vname(v));
        conj.push_back(
            aforall_val(v, append_gamma(qv, tcomm(br.guard.ch, Dir::In, vname(v)))));
        VSubst flow = flow_subst(traj, vname(d), p->ode);
        flow[br.guard.var] = vname(v);  // the input overrides the flow value
        AssnPtr fired = subst_vars(qi, flow);
        fired = append_gamma(fired, tconcat(wait_tt, tcomm(br.guard.ch, Dir::In, vname(v))));
        conj.push_back(with_hint(
            aforall_time(d, vconst(0ll), aforall_val(v, aimplies(in_domain, fired))), traj,
            p->cond));
      }
    }

    // Domain exit, as for a plain ODE but with the branch readiness recorded.
    conj.push_back(aimplies(anot(assn_of_bexpr(p->cond)), q));
    {
      std::string d = fresh("d");
      std::string t = fresh("t");
      AssnPtr in_domain = aforall_range(t, vconst(0ll), false, vname(d), true,
                                        at_time(p->cond, traj, vname(t), p->ode));
      AssnPtr out_at_d = anot(at_time(p->cond, traj, vname(d), p->ode));
      AssnPtr q_at_d = append_gamma(subst_vars(q, flow_subst(traj, vname(d), p->ode)),
                                    twait(vname(d), traj, rdy));
      conj.push_back(with_hint(
          aforall_time(d, vconst(0ll), aimplies(aand(in_domain, out_at_d), q_at_d)), traj,
          p->cond));
    }

    AssnPtr out = conj.back();
    for (size_t i = conj.size() - 1; i-- > 0;) out = aand(conj[i], out);
    return out;
  }
};

}  // namespace detail

inline WpResult wp(const ProcPtr& p, const AssnPtr& q, WpCfg cfg = {}) {
  std::set<std::string> sv = cfg.statevars.empty() ? proc_vars(p) : cfg.statevars;
  detail::WpGen gen(cfg, std::move(sv));
  AssnPtr pre = gen.go(p, q);
  return {std::move(pre), gen.take_vcs()};
}

// Strongest postcondition for a parallel composition from component
// postconditions: some pair of component traces synchronizes into gamma.
inline AssnPtr sp_parallel(const std::set<std::string>& cs, const AssnPtr& sp1,
                           const AssnPtr& sp2) {
  AssnPtr a1 = subst_gamma(sp1, tvar("$tr1"));
  AssnPtr a2 = subst_gamma(sp2, tvar("$tr2"));
  AssnPtr body = aand(a1, aand(a2, async_atom(tvar("$tr1"), cs, tvar("$tr2"), tgamma())));
  return aexists_trace("$tr1", aexists_trace("$tr2", std::move(body)));
}

// ---------------------------------------------------------------------------
// Hoare-triple checking

struct TripleReport {
  bool valid = true;
  size_t states = 0;      // states where the precondition held
  size_t runs = 0;        // executions checked
  size_t unknown = 0;     // runs where the postcondition evaluated to unknown
  std::string counterexample;
};

// Exact check over a finite value domain: discrete processes only.
inline TripleReport check_triple_exact(const AssnPtr& P, const ProcPtr& p, const AssnPtr& Q,
                                       const std::vector<double>& domain, size_t rep_bound = 3,
                                       EvalCfg ecfg = {}) {
  if (ecfg.value_domain.empty()) ecfg.value_domain = domain;
  TripleReport rep;
  std::set<std::string> varset = proc_vars(p);
  std::vector<std::string> vars(varset.begin(), varset.end());
  std::vector<size_t> idx(vars.size(), 0);
  while (true) {
    State s;
    for (size_t i = 0; i < vars.size(); ++i) s[vars[i]] = domain[idx[i]];
    if (eval_assn(P, s, Trace{}, ecfg) == Tri::True) {
      ++rep.states;
      for (auto& r : enumerate_runs(p, s, domain, rep_bound)) {
        ++rep.runs;
        Tri v = eval_assn(Q, r.state, r.trace, ecfg);
        if (v != Tri::True) {
          rep.valid = false;
          if (v == Tri::Unknown) ++rep.unknown;
          if (rep.counterexample.empty())
            rep.counterexample = "post " + std::string(tri_str(v)) + " after trace " +
                                 trace_str(r.trace);
        }
      }
    }
    size_t i = 0;
    for (; i < vars.size(); ++i) {
      if (++idx[i] < domain.size()) break;
      idx[i] = 0;
    }
    if (i == vars.size() || vars.empty()) break;
  }
  return rep;
}

// Sampled check: random start states satisfying P, random executions, the
// postcondition must never evaluate to false.
inline TripleReport check_triple_test(const AssnPtr& P, const ProcPtr& p, const AssnPtr& Q,
                                      uint64_t seed, size_t trials, const EvalCfg& ecfg = {},
                                      const RandomOracleCfg& ocfg = {}, const ExecCfg& xcfg = {}) {
  TripleReport rep;
  std::mt19937_64 rng(seed);
  std::set<std::string> varset = proc_vars(p);
  std::vector<std::string> vars(varset.begin(), varset.end());
  std::uniform_int_distribution<int> val(-2, 2);
  for (size_t i = 0; i < trials; ++i) {
    State s;
    for (auto& x : vars) s[x] = val(rng);
    if (eval_assn(P, s, Trace{}, ecfg) != Tri::True) continue;
    ++rep.states;
    RandomOracle oracle(rng(), ocfg);
    BigResult r;
    try {
      r = big_step(p, s, oracle, xcfg);
    } catch (const ExecError&) {
      continue;  // budget exhausted; not a verdict
    }
    ++rep.runs;
    Tri v = eval_assn(Q, r.state, r.trace, ecfg);
    if (v == Tri::Unknown) ++rep.unknown;
    if (v == Tri::False) {
      rep.valid = false;
      if (rep.counterexample.empty())
        rep.counterexample = "post false after trace " + trace_str(r.trace);
    }
  }
  return rep;
}

// Deterministic solver-neutral emission: one s-expression per VC.
inline std::string emit_vc(const std::vector<AssnPtr>& vcs) {
  std::ostringstream out;
  out << "(declare-sort Trace 0)\n(declare-const gamma Trace)\n";
  for (size_t i = 0; i < vcs.size(); ++i)
    out << "(assert-vc vc" << i << " " << assn_sexp(vcs[i]) << ")\n";
  return out.str();
}

}  // namespace hcsp
