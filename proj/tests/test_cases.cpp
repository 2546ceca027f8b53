#include <doctest.h>

#include "hcsp/cases.hpp"
#include "hcsp/pretty.hpp"

using namespace hcsp;

TEST_CASE("lander thrust formula at the setpoint") {
  // at v = -1.5, w = 3.732 the correction terms vanish and f returns 3.732
  State s{{"a", -1.5}, {"b", 3.732}};
  double f = eval_expr(lander_thrust(evar("a"), evar("b")), s);
  CHECK(f == doctest::Approx(3.732).epsilon(1e-12));
}

TEST_CASE("lander stays in the velocity band for 40 periods") {
  LanderReport rep = lander_check(40);
  CHECK(rep.safe);
  CHECK(rep.samples > 40 * 64u);
  CHECK(rep.min_v > -1.55);
  CHECK(rep.max_v < -1.45);
  // the controller holds v near the -1.5 setpoint, well inside the band
  CHECK(rep.min_v > -1.52);
  CHECK(rep.max_v < -1.48);
}

TEST_CASE("lander period cadence") {
  // the exchange at t = 2T coincides with the horizon, so two periods hold
  // exactly one chv/chw/chc exchange
  LanderReport rep = lander_check(2);
  CHECK(rep.safe);
  size_t comms = 0;
  double waited = 0;
  for (auto& e : rep.trace.events) {
    if (e.kind == Event::Kind::Comm) ++comms;
    if (e.kind == Event::Kind::Wait) waited += e.dur;
  }
  CHECK(comms == 3);
  CHECK(waited == doctest::Approx(2 * kLanderPeriod).epsilon(1e-9));
}

TEST_CASE("lander detects an unsafe initial velocity") {
  State bad = lander_init();
  bad["v"] = -1.6;
  LanderReport rep = lander_check(1, 1e-3, bad);
  CHECK(!rep.safe);
  CHECK(rep.viol_time == doctest::Approx(0.0));
}

TEST_CASE("scheduler runs clean over 10 seeds") {
  std::vector<uint64_t> seeds;
  for (uint64_t s = 1; s <= 10; ++s) seeds.push_back(s);
  SchedReport rep = scheduler_check(20, seeds);
  CHECK(rep.clean());
  CHECK(rep.checks > 0);
  CHECK(rep.rounds_seen >= 20);
}

TEST_CASE("scheduler mutual exclusion holds with equal priorities") {
  SchedParams pm;
  pm.prior1 = pm.prior2 = 1;
  SchedReport rep = scheduler_check(10, {7, 8, 9}, pm);
  CHECK(rep.double_run == 0);
  CHECK(rep.budget_viol == 0);
  CHECK(rep.ri_viol == 0);
}

TEST_CASE("scheduler with one trivial competitor never preempts the hog") {
  // module 2 costs as much as its period, so it always wants the processor;
  // with lower priority it must still never run while module 1 is running
  SchedParams pm;
  pm.period2 = 2;
  pm.cost2 = 2;
  SchedReport rep = scheduler_check(10, {1, 2, 3}, pm);
  CHECK(rep.double_run == 0);
  CHECK(rep.prio_viol == 0);
}
