#pragma once

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "hcsp/trace.hpp"

namespace hcsp {

struct SyncError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline bool in_cs(const std::set<std::string>& cs, const std::string& ch) {
  return cs.count(ch) != 0;
}

struct SyncState {
  std::vector<Event> t1, t2;
  size_t i1 = 0, i2 = 0;
  bool d1 = false, d2 = false;  // component delta markers
};

// Restricts a wait event to its first d time units, leaving the rest.
inline std::pair<Event, Event> split_wait(const Event& w, double d) {
  Event head = wait_event(d, w.traj, w.rdy);
  double rest = std::isinf(w.dur) ? kInf : w.dur - d;
  Event tail = wait_event(rest, traj_shift(w.traj, d), w.rdy);
  return {head, tail};
}

}  // namespace hcsp::detail

// All synchronizations of tr1 and tr2 over channel set cs. Deadlocked
// combinations yield a trace ending in delta. The search is a BFS over
// residual positions, capped to keep nondeterministic interleavings finite.
inline std::vector<Trace> sync_traces(const Trace& tr1, const std::set<std::string>& cs,
                                      const Trace& tr2, size_t max_states = 10000,
                                      double tol = 1e-9) {
  using detail::in_cs;
  std::vector<Trace> results;
  struct Node {
    std::vector<Event> r1, r2;  // residual suffixes
    bool d1, d2;
    Trace out;
  };
  std::deque<Node> work;
  work.push_back({tr1.events, tr2.events, tr1.delta, tr2.delta, {}});
  size_t expanded = 0;
  auto emit = [&](Trace t) {
    for (auto& r : results)
      if (trace_close(r, t, tol)) return;
    results.push_back(std::move(t));
  };
  while (!work.empty()) {
    if (++expanded > max_states)
      throw SyncError("sync_traces: state cap exceeded (" + std::to_string(max_states) + ")");
    Node n = work.front();
    work.pop_front();
    auto deadlock = [&] {
      Trace t = n.out;
      t.delta = true;
      emit(std::move(t));
    };
    auto push = [&](Node m, Event e) {
      m.out.events.push_back(std::move(e));
      work.push_back(std::move(m));
    };
    bool e1 = n.r1.empty(), e2 = n.r2.empty();
    if (e1 && e2) {
      Trace t = n.out;
      t.delta = n.d1 || n.d2;
      emit(std::move(t));
      continue;
    }
    const Event* h1 = e1 ? nullptr : &n.r1.front();
    const Event* h2 = e2 ? nullptr : &n.r2.front();
    bool progressed = false;
    // interleave a comm head on a channel outside cs (either side)
    auto unpair = [&](const Event* h, bool left) {
      if (!h || h->kind != Event::Kind::Comm) return;
      if (h->dir != Dir::Sync && in_cs(cs, h->ch)) return;
      Node m = n;
      auto& r = left ? m.r1 : m.r2;
      r.erase(r.begin());
      push(std::move(m), *h);
      progressed = true;
    };
    unpair(h1, true);
    unpair(h2, false);
    if (h1 && h2 && h1->kind == Event::Kind::Comm && h2->kind == Event::Kind::Comm &&
        h1->ch == h2->ch && in_cs(cs, h1->ch) &&
        ((h1->dir == Dir::Out && h2->dir == Dir::In) ||
         (h1->dir == Dir::In && h2->dir == Dir::Out)) &&
        std::abs(h1->value - h2->value) <= tol) {
      Node m = n;
      m.r1.erase(m.r1.begin());
      m.r2.erase(m.r2.begin());
      push(std::move(m), comm_event(h1->ch, Dir::Sync, h1->value));
      progressed = true;
    }
    if (h1 && h2 && h1->kind == Event::Kind::Wait && h2->kind == Event::Kind::Wait &&
        compat(h1->rdy, h2->rdy)) {
      double d1 = h1->dur, d2 = h2->dur;
      Node m = n;
      m.r1.erase(m.r1.begin());
      m.r2.erase(m.r2.begin());
      if (std::isinf(d1) && std::isinf(d2)) {
        push(std::move(m), wait_event(kInf, traj_merge(h1->traj, h2->traj),
                                      rdy_union(h1->rdy, h2->rdy)));
      } else if (std::abs(d1 - d2) <= tol && !std::isinf(d1) && !std::isinf(d2)) {
        push(std::move(m), wait_event(d1, traj_merge(h1->traj, h2->traj),
                                      rdy_union(h1->rdy, h2->rdy)));
      } else if (d1 > d2) {
        auto [head, tail] = detail::split_wait(*h1, d2);
        m.r1.insert(m.r1.begin(), tail);
        push(std::move(m), wait_event(d2, traj_merge(head.traj, h2->traj),
                                      rdy_union(h1->rdy, h2->rdy)));
      } else {
        auto [head, tail] = detail::split_wait(*h2, d1);
        m.r2.insert(m.r2.begin(), tail);
        push(std::move(m), wait_event(d1, traj_merge(h1->traj, head.traj),
                                      rdy_union(h1->rdy, h2->rdy)));
      }
      progressed = true;
    }
    // a wait head against an exhausted other side passes through
    auto wait_vs_empty = [&](const Event* h, bool other_empty, bool left) {
      if (!h || h->kind != Event::Kind::Wait || !other_empty) return;
      Node m = n;
      auto& r = left ? m.r1 : m.r2;
      r.erase(r.begin());
      push(std::move(m), *h);
      progressed = true;
    };
    wait_vs_empty(h1, e2, true);
    wait_vs_empty(h2, e1, false);
    if (!progressed) deadlock();
  }
  if (results.empty()) throw SyncError("sync_traces: empty result set");
  return results;
}

// Membership test: does tr1 || tr2 over cs admit the synchronized trace out?
inline bool sync_check(const Trace& tr1, const std::set<std::string>& cs, const Trace& tr2,
                       const Trace& out, size_t max_states = 10000, double tol = 1e-9) {
  for (auto& t : sync_traces(tr1, cs, tr2, max_states, tol))
    if (trace_close(t, out, tol)) return true;
  return false;
}

}  // namespace hcsp
