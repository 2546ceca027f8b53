#pragma once

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "hcsp/process.hpp"
#include "hcsp/trajectory.hpp"

namespace hcsp {

constexpr double kInf = std::numeric_limits<double>::infinity();

using RdySet = std::set<ChanDir>;

// Two ready sets are compatible unless some channel has its input end in one
// and its output end in the other: such processes would communicate instead
// of waiting.
inline bool compat(const RdySet& r1, const RdySet& r2) {
  for (auto& cd : r1) {
    if (cd.dir == Dir::In && r2.count({cd.ch, Dir::Out})) return false;
    if (cd.dir == Dir::Out && r2.count({cd.ch, Dir::In})) return false;
  }
  return true;
}

inline RdySet rdy_union(const RdySet& a, const RdySet& b) {
  RdySet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

struct Event {
  enum class Kind { Comm, Wait };
  Kind kind;
  // Comm
  std::string ch;
  Dir dir = Dir::Sync;
  double value = 0;
  // Wait
  double dur = 0;  // > 0, possibly kInf
  TrajPtr traj;
  RdySet rdy;
};

inline Event comm_event(std::string ch, Dir dir, double v) {
  Event e;
  e.kind = Event::Kind::Comm;
  e.ch = std::move(ch);
  e.dir = dir;
  e.value = v;
  return e;
}

inline Event wait_event(double d, TrajPtr traj, RdySet rdy) {
  Event e;
  e.kind = Event::Kind::Wait;
  e.dur = d;
  e.traj = std::move(traj);
  e.rdy = std::move(rdy);
  return e;
}

// A trace is a sequence of events; `delta` marks terminal deadlock.
struct Trace {
  std::vector<Event> events;
  bool delta = false;
};

inline Trace trace_concat(const Trace& a, const Trace& b) {
  if (a.delta) return a;
  Trace out = a;
  out.events.insert(out.events.end(), b.events.begin(), b.events.end());
  out.delta = b.delta;
  return out;
}

inline Trace delta_trace() {
  Trace t;
  t.delta = true;
  return t;
}

// total duration of a trace (sum of wait durations)
inline double trace_duration(const Trace& t) {
  double d = 0;
  for (auto& e : t.events)
    if (e.kind == Event::Kind::Wait) d += e.dur;
  return d;
}

inline bool state_close(const State& a, const State& b, double tol) {
  std::set<std::string> keys;
  for (auto& [k, v] : a) keys.insert(k);
  for (auto& [k, v] : b) keys.insert(k);
  for (auto& k : keys)
    if (std::abs(state_get(a, k) - state_get(b, k)) > tol) return false;
  return true;
}

inline bool event_close(const Event& a, const Event& b, double tol, int samples = 8) {
  if (a.kind != b.kind) return false;
  if (a.kind == Event::Kind::Comm)
    return a.ch == b.ch && a.dir == b.dir && std::abs(a.value - b.value) <= tol;
  if (a.rdy != b.rdy) return false;
  if (std::isinf(a.dur) || std::isinf(b.dur)) return std::isinf(a.dur) && std::isinf(b.dur);
  if (std::abs(a.dur - b.dur) > tol) return false;
  double d = std::min(a.dur, b.dur);
  for (int i = 0; i <= samples; ++i) {
    double t = d * i / samples;
    if (!state_close(traj_eval(a.traj, t), traj_eval(b.traj, t), tol)) return false;
  }
  return true;
}

inline bool trace_close(const Trace& a, const Trace& b, double tol, int samples = 8) {
  if (a.delta != b.delta || a.events.size() != b.events.size()) return false;
  for (size_t i = 0; i < a.events.size(); ++i)
    if (!event_close(a.events[i], b.events[i], tol, samples)) return false;
  return true;
}

inline std::string dir_str(Dir d) {
  switch (d) {
    case Dir::In: return "?";
    case Dir::Out: return "!";
    case Dir::Sync: return ".";
  }
  return "?";
}

inline std::string rdy_str(const RdySet& r) {
  std::string out = "{";
  bool first = true;
  for (auto& cd : r) {
    if (!first) out += ",";
    first = false;
    out += cd.ch + static_cast<char>(cd.dir);
  }
  return out + "}";
}

inline std::string event_str(const Event& e) {
  if (e.kind == Event::Kind::Comm) {
    std::string d = e.dir == Dir::Sync ? "" : dir_str(e.dir);
    return "<" + e.ch + d + "," + std::to_string(e.value) + ">";
  }
  std::string dur = std::isinf(e.dur) ? "inf" : std::to_string(e.dur);
  return "<" + dur + ",_," + rdy_str(e.rdy) + ">";
}

inline std::string trace_str(const Trace& t) {
  std::string out = "[";
  for (size_t i = 0; i < t.events.size(); ++i) {
    if (i) out += " ";
    out += event_str(t.events[i]);
  }
  out += "]";
  if (t.delta) out += "delta";
  return out;
}

}  // namespace hcsp
