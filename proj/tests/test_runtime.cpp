#include <doctest.h>

#include <cmath>

#include "hcsp/json_io.hpp"
#include "hcsp/trace.hpp"
#include "hcsp/trajectory.hpp"

using namespace hcsp;

TEST_CASE("compat detects dual channel ends") {
  RdySet r1{{"ch", Dir::Out}};
  RdySet r2{{"ch", Dir::In}};
  RdySet r3{{"dh", Dir::In}};
  CHECK(!compat(r1, r2));
  CHECK(!compat(r2, r1));
  CHECK(compat(r1, r3));
  CHECK(compat(r1, r1));
  CHECK(compat({}, r2));
}

TEST_CASE("constant trajectory") {
  auto t = traj_const({{"x", 2.0}});
  CHECK(traj_eval(t, 0.0).at("x") == 2.0);
  CHECK(traj_eval(t, 5.0).at("x") == 2.0);
}

TEST_CASE("closed-form solution for a clock") {
  OdeField f{{"t", econst(1)}};
  auto traj = traj_ode(f, {{"t", 0.0}});
  CHECK(traj_eval(traj, 0.5).at("t") == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(traj_eval(traj, 2.0).at("t") == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("closed-form solution for exponential growth") {
  OdeField f{{"x", evar("x")}};
  auto traj = traj_ode(f, {{"x", 1.0}});
  CHECK(traj_eval(traj, 1.0).at("x") == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
}

TEST_CASE("affine closed form matches RK4 on a coupled system") {
  // coupled field forces the numeric path
  OdeField f{{"x", evar("y")}, {"y", eneg(evar("x"))}};
  auto traj = traj_ode(f, {{"x", 1.0}, {"y", 0.0}}, 1e-3);
  State s = traj_eval(traj, 1.0);
  CHECK(s.at("x") == doctest::Approx(std::cos(1.0)).epsilon(1e-8));
  CHECK(s.at("y") == doctest::Approx(-std::sin(1.0)).epsilon(1e-8));
}

TEST_CASE("numeric fallback for nonlinear dynamics") {
  // dx = x^2, x(0)=1: solution 1/(1-t)
  OdeField f{{"x", emul(evar("x"), evar("x"))}};
  auto traj = traj_ode(f, {{"x", 1.0}}, 1e-4);
  CHECK(traj_eval(traj, 0.5).at("x") == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("shift and merge") {
  OdeField f{{"t", econst(1)}};
  auto traj = traj_ode(f, {{"t", 0.0}});
  auto shifted = traj_shift(traj, 1.0);
  CHECK(traj_eval(shifted, 0.5).at("t") == doctest::Approx(1.5));
  auto merged = traj_merge(traj_const({{"x", 7.0}}), traj);
  State s = traj_eval(merged, 2.0);
  CHECK(s.at("x") == 7.0);
  CHECK(s.at("t") == doctest::Approx(2.0));
}

TEST_CASE("glued trajectory evaluates piecewise") {
  auto g = traj_glued(traj_const({{"x", 1.0}}), 1.0, traj_const({{"x", 2.0}}));
  CHECK(traj_eval(g, 0.5).at("x") == 1.0);
  CHECK(traj_eval(g, 1.5).at("x") == 2.0);
}

TEST_CASE("trace concat respects the deadlock marker") {
  Trace a;
  a.events.push_back(comm_event("ch", Dir::Out, 1));
  Trace d = delta_trace();
  Trace ad = trace_concat(a, d);
  CHECK(ad.delta);
  CHECK(ad.events.size() == 1);
  Trace da = trace_concat(d, a);
  CHECK(da.delta);
  CHECK(da.events.empty());
}

TEST_CASE("trace json round trip") {
  Trace t;
  t.events.push_back(comm_event("ch", Dir::Sync, 3.0));
  t.events.push_back(wait_event(1.0, traj_const({{"x", 1.0}}), {{"ch", Dir::In}}));
  OdeField f{{"t", econst(1)}};
  t.events.push_back(wait_event(kInf, traj_ode(f, {{"t", 0.0}}), {{"dh", Dir::Out}}));
  Json j = trace_to_json(t);
  Trace back = trace_from_json(j);
  CHECK(trace_close(t, back, 1e-12));
  CHECK(back.events[2].dur == kInf);
}

TEST_CASE("event and trace distance") {
  Event w1 = wait_event(1.0, traj_const({{"x", 1.0}}), {});
  Event w2 = wait_event(1.0 + 1e-8, traj_const({{"x", 1.0 + 1e-8}}), {});
  CHECK(event_close(w1, w2, 1e-6));
  CHECK(!event_close(w1, w2, 1e-10));
  Event w3 = wait_event(1.0, traj_const({{"x", 1.0}}), {{"ch", Dir::In}});
  CHECK(!event_close(w1, w3, 1e-6));  // ready sets must match exactly
}
