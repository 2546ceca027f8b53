#include <doctest.h>

#include <random>

#include "hcsp/parser.hpp"
#include "hcsp/wp.hpp"
#include "generators.hpp"

using namespace hcsp;

namespace {

WpCfg now_only(size_t rep_bound = 3) {
  WpCfg cfg;
  cfg.comm_mode = WpCfg::CommMode::NowOnly;
  cfg.rep_bound = rep_bound;
  return cfg;
}

// rough node count with an early cutoff, used to skip pathological unrollings
size_t assn_size(const AssnPtr& a, size_t cap) {
  if (!a) return 0;
  size_t n = 1;
  for (const AssnPtr& c : {a->a, a->b}) {
    if (n >= cap) return n;
    n += assn_size(c, cap - n);
  }
  return n;
}

EvalCfg domain_cfg() {
  EvalCfg cfg;
  cfg.value_domain = {0, 1, 2};
  return cfg;
}

// random postcondition mixing state predicates and trace atoms
AssnPtr random_post(std::mt19937_64& rng) {
  AssnPtr base = assn_of_bexpr(gen::bexpr(rng, 2));
  switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0: return base;
    case 1: return aand(base, emp_assn());
    case 2: return aor(base, anot(emp_assn()));
    default:
      return aor(base, atrace_eq(tgamma(), tcomm(gen::kChans[0], Dir::Out,
                                                 vconst((long long)std::uniform_int_distribution<int>(
                                                     -2, 2)(rng)))));
  }
}

}  // namespace

TEST_CASE("wp golden rules: skip and assignment") {
  auto q = acmp(BExpr::Op::Eq, vname("x"), vconst(1ll));
  CHECK(assn_sexp(wp(pskip(), q).pre) == assn_sexp(q));

  auto pre = wp(passign("x", eadd(evar("x"), econst(1))), q).pre;
  CHECK(eval_assn(pre, State{{"x", 0}}, Trace{}) == Tri::True);
  CHECK(eval_assn(pre, State{{"x", 1}}, Trace{}) == Tri::False);
}

TEST_CASE("wp of an output against emp is false: every run extends the trace") {
  auto pre = wp(poutput("ch", econst(1)), emp_assn()).pre;
  CHECK(eval_assn(pre, State{}, Trace{}) == Tri::False);
}

TEST_CASE("wp of an output against its own communication closure holds") {
  auto q = out_assn(tid_traj({}), "ch", vconst(1ll));
  auto pre = wp(poutput("ch", econst(1)), q).pre;
  EvalCfg cfg;
  cfg.sampled_definite = true;
  CHECK(eval_assn(pre, State{}, Trace{}, cfg) == Tri::True);
}

TEST_CASE("wp input binds the received value") {
  // after ch?x, x is in the domain and gamma records it
  auto q = aor(atrace_eq(tgamma(), tcomm("ch", Dir::In, vname("x"))), anot(emp_assn()));
  auto pre = wp(pinput("ch", "x"), q, now_only()).pre;
  CHECK(eval_assn(pre, State{{"x", 9}}, Trace{}, domain_cfg()) == Tri::True);

  auto q2 = acmp(BExpr::Op::Le, vname("x"), vconst(1ll));
  auto pre2 = wp(pinput("ch", "x"), q2, now_only()).pre;
  // some value in {0,1,2} violates x<=1
  CHECK(eval_assn(pre2, State{{"x", 0}}, Trace{}, domain_cfg()) == Tri::False);
}

TEST_CASE("wp for the continuous evolution reaches the boundary") {
  // <t_dot = 1 & t < 1>: from t=0 it runs to exactly t=1 and logs one wait
  auto p = parse_process("<t_dot = 1 & t < 1>");
  auto q = aand(acmp(BExpr::Op::Ge, vname("t"), vconst(1ll)), anot(emp_assn()));
  EvalCfg cfg;
  cfg.sampled_definite = true;
  auto pre = wp(p, q).pre;
  CHECK(eval_assn(pre, State{{"t", 0}}, Trace{}, cfg) == Tri::True);

  // a postcondition violated at the boundary is caught by the sampled check
  auto qbad = acmp(BExpr::Op::Lt, vname("t"), vconst(rat_from_string("0.5")));
  auto prebad = wp(p, qbad).pre;
  CHECK(eval_assn(prebad, State{{"t", 0}}, Trace{}, cfg) == Tri::False);
}

TEST_CASE("wp exactness against run enumeration on discrete programs") {
  std::mt19937_64 rng(424242);
  const std::vector<double> domain{0, 1, 2};
  EvalCfg ecfg = domain_cfg();
  size_t checked = 0, agreements = 0;
  for (int iter = 0; iter < 300; ++iter) {
    ProcPtr p = gen::proc_discrete(rng, 4);
    while (gen::enum_bound(p, 3, 3) > 20000) p = gen::proc_discrete(rng, 4);
    State s;
    for (auto& x : gen::kVars) s[x] = std::uniform_int_distribution<int>(-2, 2)(rng);
    for (int k = 0; k < 3; ++k) {
      AssnPtr q = random_post(rng);
      AssnPtr pre = wp(p, q, now_only(3)).pre;
      Tri got = eval_assn(pre, s, Trace{}, ecfg);
      bool expect = true;
      for (auto& r : enumerate_runs(p, s, domain, 3))
        if (eval_assn(q, r.state, r.trace, ecfg) != Tri::True) { expect = false; break; }
      ++checked;
      REQUIRE(got != Tri::Unknown);
      if ((got == Tri::True) == expect) ++agreements;
    }
  }
  CHECK(agreements == checked);
  CHECK(checked == 900);
}

TEST_CASE("wp monotonicity in the postcondition") {
  std::mt19937_64 rng(777);
  EvalCfg ecfg = domain_cfg();
  for (int iter = 0; iter < 100; ++iter) {
    ProcPtr p = gen::proc_discrete(rng, 3);
    AssnPtr q1 = assn_of_bexpr(gen::bexpr(rng, 2));
    AssnPtr q2 = aor(q1, assn_of_bexpr(gen::bexpr(rng, 2)));  // q1 implies q2
    State s;
    for (auto& x : gen::kVars) s[x] = std::uniform_int_distribution<int>(-2, 2)(rng);
    if (eval_assn(wp(p, q1, now_only()).pre, s, Trace{}, ecfg) == Tri::True)
      CHECK(eval_assn(wp(p, q2, now_only()).pre, s, Trace{}, ecfg) == Tri::True);
  }
}

TEST_CASE("wp soundness on hybrid programs: true precondition means safe runs") {
  std::mt19937_64 rng(31337);
  EvalCfg ecfg = domain_cfg();
  ecfg.sampled_definite = true;
  // nested delay quantifiers multiply the sample count, keep it low
  ecfg.samples = 6;
  ecfg.traj_samples = 8;
  RandomOracleCfg ocfg;
  ocfg.value_domain = {0, 1, 2};
  // keep the unrolled precondition small but still covering every sampled
  // run: the oracle does at most 3 loop iterations in total
  ocfg.max_reps = 3;
  WpCfg wcfg;
  wcfg.rep_bound = 4;
  size_t applicable = 0, violations = 0;
  for (int iter = 0; iter < 120; ++iter) {
    ProcPtr p = gen::proc_hybrid(rng, 3);
    AssnPtr q = assn_of_bexpr(gen::bexpr(rng, 2));
    AssnPtr pre;
    try {
      pre = wp(p, q, wcfg).pre;
    } catch (const WpError&) {
      continue;
    }
    if (assn_size(pre, 4000) >= 4000) continue;
    State s = gen::state(rng);
    Tri v;
    try {
      v = eval_assn(pre, s, Trace{}, ecfg);
    } catch (const EvalError&) {
      continue;
    }
    if (v != Tri::True) continue;
    ++applicable;
    for (int run = 0; run < 5; ++run) {
      RandomOracle oracle(rng(), ocfg);
      try {
        auto r = big_step(p, s, oracle);
        if (eval_assn(q, r.state, r.trace, ecfg) == Tri::False) ++violations;
      } catch (const ExecError&) {
      }
    }
  }
  CHECK(applicable > 20);
  CHECK(violations == 0);
}

TEST_CASE("annotated repetition yields the invariant plus side conditions") {
  auto body = passign("x", eadd(evar("x"), econst(1)));
  auto q = acmp(BExpr::Op::Ge, vname("x"), vconst(0ll));
  WpCfg cfg;
  cfg.rep_invariants[0] = q;  // invariant: x >= 0
  auto res = wp(prep(body), q, cfg);
  CHECK(assn_sexp(res.pre) == assn_sexp(q));
  REQUIRE(res.side_vcs.size() == 2);
  for (double x0 : {0.0, 1.0, 3.0}) {
    CHECK(eval_assn(res.side_vcs[0], State{{"x", x0}}, Trace{}) == Tri::True);
    CHECK(eval_assn(res.side_vcs[1], State{{"x", x0}}, Trace{}) == Tri::True);
  }
}

TEST_CASE("check_triple exact mode") {
  auto p = passign("x", eadd(evar("x"), econst(1)));
  auto P = acmp(BExpr::Op::Eq, vname("x"), vconst(0ll));
  auto Q = aand(acmp(BExpr::Op::Eq, vname("x"), vconst(1ll)), emp_assn());
  auto rep = check_triple_exact(P, p, Q, {0, 1, 2});
  CHECK(rep.valid);
  CHECK(rep.states == 1);

  auto bad = check_triple_exact(atrue(), p, acmp(BExpr::Op::Eq, vname("x"), vconst(2ll)), {0, 1, 2});
  CHECK_FALSE(bad.valid);
  CHECK(bad.counterexample != "");

  // bounded repetition from x=0 stays within 0..3
  auto loop = prep(p);
  auto Q3 = aand(acmp(BExpr::Op::Ge, vname("x"), vconst(0ll)),
                 acmp(BExpr::Op::Le, vname("x"), vconst(3ll)));
  CHECK(check_triple_exact(P, loop, Q3, {0, 1, 2}, 3).valid);
  auto Q2 = acmp(BExpr::Op::Le, vname("x"), vconst(2ll));
  CHECK_FALSE(check_triple_exact(P, loop, Q2, {0, 1, 2}, 3).valid);
}

TEST_CASE("check_triple test mode covers all output rules") {
  auto p = poutput("ch", econst(1));
  auto Q = out_assn(tid_traj({}), "ch", vconst(1ll));
  auto rep = check_triple_test(atrue(), p, Q, 99, 40);
  CHECK(rep.valid);
  CHECK(rep.runs > 0);
  CHECK(rep.unknown == 0);
}

TEST_CASE("sp_parallel composes component postconditions through sync") {
  EvalCfg cfg;
  cfg.trace_pool_complete = true;

  // both components terminate silently: the parallel trace is empty
  auto sp = sp_parallel({}, emp_assn(), emp_assn());
  CHECK(eval_assn(sp, State{}, Trace{}, cfg) == Tri::True);
  Trace noisy;
  noisy.events.push_back(comm_event("ch", Dir::Sync, 1));
  CHECK(eval_assn(sp, State{}, noisy, cfg) == Tri::False);

  // ch!3 || ch?x over {ch}: exactly the synchronized event with value 3
  auto sp1 = atrace_eq(tgamma(), tcomm("ch", Dir::Out, vconst(3ll)));
  auto sp2 = atrace_eq(tgamma(), tcomm("ch", Dir::In, vname("x")));
  auto spp = sp_parallel({"ch"}, sp1, sp2);
  EvalCfg cfg2 = cfg;
  Trace t1, t2;
  t1.events.push_back(comm_event("ch", Dir::Out, 3));
  t2.events.push_back(comm_event("ch", Dir::In, 3));
  cfg2.trace_pool = {t1, t2};
  State s{{"x", 3}};
  Trace good;
  good.events.push_back(comm_event("ch", Dir::Sync, 3));
  CHECK(eval_assn(spp, s, good, cfg2) == Tri::True);
  Trace wrong;
  wrong.events.push_back(comm_event("ch", Dir::Sync, 2));
  CHECK(eval_assn(spp, s, wrong, cfg2) == Tri::False);
}

TEST_CASE("wp rejects parallel processes") {
  auto p = pparallel(pskip(), {"ch"}, pskip());
  CHECK_THROWS_AS(wp(p, atrue()), WpError);
}

TEST_CASE("vc emission is deterministic") {
  auto body = passign("x", eadd(evar("x"), econst(1)));
  auto q = acmp(BExpr::Op::Ge, vname("x"), vconst(0ll));
  WpCfg cfg;
  cfg.rep_invariants[0] = q;
  auto r1 = wp(prep(body), q, cfg);
  auto r2 = wp(prep(body), q, cfg);
  CHECK(emit_vc(r1.side_vcs) == emit_vc(r2.side_vcs));
  CHECK(emit_vc(r1.side_vcs).find("vc1") != std::string::npos);
}
