#include <doctest.h>

#include "hcsp/simulator.hpp"

using namespace hcsp;

TEST_CASE("terminated components finish without trace") {
  auto r = simulate(pparallel(pskip(), {}, pskip()), {}, 1);
  CHECK(r.status == SimStatus::Done);
  CHECK(r.trace.events.empty());

  auto r2 = simulate(pparallel(passign("x", econst(1)), {}, passign("y", econst(2))), {}, 1);
  CHECK(r2.status == SimStatus::Done);
  CHECK(state_get(r2.state, "x") == 1);
  CHECK(state_get(r2.state, "y") == 2);
  CHECK(r2.trace.events.empty());
}

TEST_CASE("matched communication synchronizes immediately") {
  auto sys = pparallel(poutput("ch", econst(3)), {"ch"}, pinput("ch", "x"));
  auto r = simulate(sys, {}, 7);
  CHECK(r.status == SimStatus::Done);
  REQUIRE(r.trace.events.size() == 1);
  CHECK(r.trace.events[0].kind == Event::Kind::Comm);
  CHECK(r.trace.events[0].ch == "ch");
  CHECK(r.trace.events[0].dir == Dir::Sync);
  CHECK(r.trace.events[0].value == 3);
  CHECK(state_get(r.state, "x") == 3);
}

TEST_CASE("a waiting partner delays the exchange and shows its ready set") {
  auto left = pseq(pwait(econst(1)), poutput("ch", econst(5)));
  auto sys = pparallel(left, {"ch"}, pinput("ch", "x"));
  auto r = simulate(sys, {}, 7);
  CHECK(r.status == SimStatus::Done);
  REQUIRE(r.trace.events.size() == 2);
  CHECK(r.trace.events[0].kind == Event::Kind::Wait);
  CHECK(r.trace.events[0].dur == doctest::Approx(1.0));
  CHECK(r.trace.events[0].rdy == RdySet{{"ch", Dir::In}});
  CHECK(r.trace.events[1].value == 5);
  CHECK(state_get(r.state, "x") == 5);
}

TEST_CASE("a lone ODE runs to its boundary") {
  auto ode = pode({{"t", econst(1)}}, bcmp(BExpr::Op::Lt, evar("t"), econst(1)));
  auto r = simulate(ode, State{{"t", 0}}, 1);
  CHECK(r.status == SimStatus::Done);
  REQUIRE(r.trace.events.size() == 1);
  CHECK(r.trace.events[0].dur == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(state_get(r.state, "t") == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("interrupt takes the communication branch mid-flow") {
  auto plant = pinterrupt({{"x", econst(1)}}, btrue(),
                          {{CommGuard{"ch", Dir::In, "y", nullptr}, pskip()}});
  auto ctrl = pseq(pwait(econst(rat(1, 2))), poutput("ch", econst(7)));
  auto r = simulate(pparallel(plant, {"ch"}, ctrl), State{{"x", 0}}, 3);
  CHECK(r.status == SimStatus::Done);
  REQUIRE(r.trace.events.size() == 2);
  CHECK(r.trace.events[0].kind == Event::Kind::Wait);
  CHECK(r.trace.events[0].dur == doctest::Approx(0.5));
  CHECK(r.trace.events[0].rdy == RdySet{{"ch", Dir::In}});
  // the plant flowed for half a time unit before being interrupted
  CHECK(state_get(traj_eval(r.trace.events[0].traj, 0.5), "x") == doctest::Approx(0.5));
  CHECK(state_get(r.state, "x") == doctest::Approx(0.5));
  CHECK(state_get(r.state, "y") == 7);
}

TEST_CASE("an unmatched offer blocks forever") {
  auto sys = pparallel(poutput("ch", econst(1)), {"ch"}, pskip());
  auto r = simulate(sys, {}, 1);
  CHECK(r.status == SimStatus::Blocked);
  REQUIRE(r.trace.events.size() == 1);
  CHECK(r.trace.events[0].dur == kInf);
  CHECK(r.trace.events[0].rdy == RdySet{{"ch", Dir::Out}});
}

TEST_CASE("channel scope keeps inner synchronization private") {
  // inner pair syncs on ch; the outer listener can never receive it
  auto inner = pparallel(poutput("ch", econst(9)), {"ch"}, pinput("ch", "x"));
  auto sys = pparallel(inner, {"ch"}, pinput("ch", "z"));
  auto r = simulate(sys, {}, 5);
  CHECK(r.status == SimStatus::Blocked);
  CHECK(state_get(r.state, "x") == 9);
  // exactly one synchronization, then the outer listener starves
  REQUIRE(r.trace.events.size() == 2);
  CHECK(r.trace.events[0].kind == Event::Kind::Comm);
  CHECK(r.trace.events[1].dur == kInf);
  CHECK(state_get(r.state, "z") == 0);
}

TEST_CASE("time cap stops endless loops") {
  auto loop = prep(pwait(econst(1)));
  SimCfg cfg;
  cfg.horizon = 10;
  auto r = simulate(loop, {}, 1, cfg);
  CHECK(r.status == SimStatus::TimeCap);
  CHECK(r.time == doctest::Approx(10));
}

TEST_CASE("deterministic replay under a fixed seed") {
  auto body = pichoice(passign("x", eadd(evar("x"), econst(1))),
                       passign("x", eadd(evar("x"), econst(2))));
  auto sys = pseq(std::vector<ProcPtr>{body, body, body, body});
  auto a = simulate(sys, State{{"x", 0}}, 42);
  auto b = simulate(sys, State{{"x", 0}}, 42);
  CHECK(state_get(a.state, "x") == state_get(b.state, "x"));
}
