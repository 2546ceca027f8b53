#include <doctest.h>

#include <random>

#include "generators.hpp"
#include "hcsp/parser.hpp"
#include "hcsp/pretty.hpp"
#include "hcsp/smallstep.hpp"

using namespace hcsp;

TEST_CASE("tau steps carry no events") {
  RandomOracle o(0);
  SmallConfig c{parse_process("x := 1"), {}};
  auto r = small_step(c, o);
  REQUIRE(r);
  CHECK(!r->ev);
  CHECK(r->next.s.at("x") == 1.0);
  CHECK(is_skip(r->next.p));
}

TEST_CASE("run_star executes a simple pipeline") {
  class NowOracle : public RandomOracle {
   public:
    NowOracle() : RandomOracle(0) {}

   protected:
    CommDelay choose_comm_delay(double) override { return {CommDelay::Kind::Now, 0}; }
    double choose_input_value() override { return 3; }
  } o;
  auto r = run_star(parse_process("ch?x; x := x + 1; ch!x"), {}, o);
  CHECK(r.completed);
  CHECK(r.final.s.at("x") == 4.0);
  REQUIRE(r.trace.events.size() == 2);
  CHECK(r.trace.events[1].value == 4.0);
}

TEST_CASE("reduce_trace merges split waits") {
  State s{{"x", 1.0}};
  Trace t;
  t.events.push_back(wait_event(1.0, traj_const(s), {}));
  t.events.push_back(wait_event(0.5, traj_const(s), {}));
  t.events.push_back(comm_event("ch", Dir::Out, 1.0));
  Trace r = reduce_trace(t);
  REQUIRE(r.events.size() == 2);
  CHECK(r.events[0].dur == 1.5);
}

TEST_CASE("reduce_trace keeps waits with different ready sets apart") {
  State s{{"x", 1.0}};
  Trace t;
  t.events.push_back(wait_event(1.0, traj_const(s), {}));
  t.events.push_back(wait_event(0.5, traj_const(s), {{"ch", Dir::Out}}));
  CHECK(reduce_trace(t).events.size() == 2);
}

TEST_CASE("reduce_trace merges ODE continuations into one solution event") {
  OdeField f{{"t", econst(1)}};
  auto p1 = traj_ode(f, {{"t", 0.0}});
  auto p2 = traj_ode(f, {{"t", 1.0}});
  Trace t;
  t.events.push_back(wait_event(1.0, p1, {}));
  t.events.push_back(wait_event(0.5, p2, {}));
  Trace r = reduce_trace(t);
  REQUIRE(r.events.size() == 1);
  CHECK(r.events[0].dur == 1.5);
  CHECK(traj_eval(r.events[0].traj, 1.25).at("t") == doctest::Approx(1.25));
}

TEST_CASE("reduce_trace does not merge waits with a state jump") {
  Trace t;
  t.events.push_back(wait_event(1.0, traj_const({{"x", 1.0}}), {}));
  t.events.push_back(wait_event(1.0, traj_const({{"x", 2.0}}), {}));
  CHECK(reduce_trace(t).events.size() == 2);
}

TEST_CASE("big and small step semantics agree on random hybrid programs") {
  std::mt19937_64 rng(31);
  int applicable = 0, failures = 0;
  for (int i = 0; i < 300; ++i) {
    ProcPtr p = gen::proc_hybrid(rng, 4);
    State s0 = gen::state(rng);
    EquivReport rep = check_equivalence(p, s0, rng());
    if (!rep.applicable) continue;
    ++applicable;
    if (!rep.ok) {
      ++failures;
      CAPTURE(pretty(p));
      CAPTURE(rep.detail);
      CHECK(rep.ok);
    }
  }
  CHECK(failures == 0);
  CHECK(applicable > 200);
}

TEST_CASE("log transformations invert each other on comm delays") {
  std::vector<LogEntry> big{
      {LogEntry::Tag::CommDelay, 0, false, 1.5},
      {LogEntry::Tag::Branch, 1, false, 0},
      {LogEntry::Tag::CommDelay, 0, false, 0},
      {LogEntry::Tag::CommDelay, 0, true, 0},
  };
  auto small = big_log_to_small(big);
  CHECK(small.size() == 5);
  auto back = small_log_to_big(small);
  REQUIRE(back.size() == big.size());
  for (size_t i = 0; i < big.size(); ++i) {
    CHECK(back[i].tag == big[i].tag);
    CHECK(back[i].value == big[i].value);
    CHECK(back[i].flag == big[i].flag);
  }
}
