#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hcsp/trace.hpp"

namespace hcsp {

struct EulerError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Forward Euler trajectory: vertices h apart, linear interpolation between.
struct EulerTraj {
  double h = 0;
  std::vector<State> verts;

  double horizon() const { return h * (verts.size() - 1); }

  State at(double t) const {
    if (t <= 0) return verts.front();
    size_t i = static_cast<size_t>(std::floor(t / h));
    if (i + 1 >= verts.size()) return verts.back();
    double w = t / h - static_cast<double>(i);
    State out = verts[i];
    for (auto& [x, v] : verts[i + 1]) out[x] = (1 - w) * state_get(verts[i], x) + w * v;
    return out;
  }
};

inline EulerTraj euler_traj(const OdeField& f, const State& x0, double h, double T) {
  if (h <= 0 || T < 0) throw EulerError("euler_traj: need h > 0 and T >= 0");
  EulerTraj tr;
  tr.h = h;
  tr.verts.push_back(x0);
  size_t n = static_cast<size_t>(std::ceil(T / h - 1e-12));
  for (size_t i = 0; i < n; ++i) {
    State d = ode_deriv(f, tr.verts.back());
    State next = tr.verts.back();
    for (auto& [x, v] : d) {
      next[x] += h * v;
      if (!std::isfinite(next[x])) throw EulerError("euler_traj: blowup");
    }
    tr.verts.push_back(std::move(next));
  }
  return tr;
}

// Global discretization error bound for a field with Lipschitz constant L
// and second-derivative bound M2 along the solution on [0, T].
inline double global_error_bound(double L, double T, double h, double M2) {
  return h / 2 * M2 * (std::exp(L * T) - 1) / L;
}

// ---------------------------------------------------------------------------
// epsilon-distances

inline bool within_distance(const State& a, const State& b, double eps) {
  for (auto& [x, v] : a)
    if (std::abs(v - state_get(b, x)) >= eps) return false;
  for (auto& [x, v] : b)
    if (std::abs(v - state_get(a, x)) >= eps) return false;
  return true;
}

inline bool within_distance(const Event& a, const Event& b, double eps,
                            unsigned traj_samples = 16) {
  if (a.kind != b.kind) return false;
  if (a.kind == Event::Kind::Comm)
    return a.ch == b.ch && a.dir == b.dir && std::abs(a.value - b.value) < eps;
  if (a.rdy != b.rdy) return false;
  if (a.dur == kInf || b.dur == kInf) return a.dur == b.dur;
  if (std::abs(a.dur - b.dur) >= eps) return false;
  double d = std::min(a.dur, b.dur);
  for (unsigned k = 0; k <= traj_samples; ++k) {
    double t = d * k / traj_samples;
    if (!within_distance(traj_eval(a.traj, t), traj_eval(b.traj, t), eps)) return false;
  }
  return true;
}

inline bool within_distance(const Trace& a, const Trace& b, double eps,
                            unsigned traj_samples = 16) {
  if (a.events.size() != b.events.size() || a.delta != b.delta) return false;
  for (size_t i = 0; i < a.events.size(); ++i)
    if (!within_distance(a.events[i], b.events[i], eps, traj_samples)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// robust (interior) predicate check

struct NegEpsCfg {
  unsigned samples = 128;  // interior perturbations beyond the axis extremes
};

// True when every sampled perturbation within eps of the point satisfies
// pred. Falsification-sound only: a true answer is not a proof.
inline bool in_neg_eps(const BExprPtr& pred, const State& point, double eps,
                       const NegEpsCfg& cfg = {}) {
  std::vector<std::string> vars;
  for (auto& [x, v] : point) vars.push_back(x);
  if (!eval_bexpr(pred, point)) return false;
  // axis-aligned extremes
  for (auto& x : vars)
    for (double s : {-1.0, 1.0}) {
      State p = point;
      p[x] += s * eps;
      if (!eval_bexpr(pred, p)) return false;
    }
  // quasi-random interior points
  const double phi = 0.6180339887498949;
  for (unsigned k = 0; k < cfg.samples; ++k) {
    State p = point;
    double u = std::fmod(phi * (k + 1), 1.0);
    for (size_t i = 0; i < vars.size(); ++i) {
      double c = std::fmod(u * 7919 * (i + 1), 2.0) - 1.0;
      p[vars[i]] += c * eps;
    }
    if (!eval_bexpr(pred, p)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// continuous vs discretized precondition experiment

using ClosedForm = std::function<State(double)>;

struct CpDpCfg {
  std::vector<double> hs{1e-1, 1e-2, 1e-3, 1e-4};
  std::vector<double> epss{1e-1, 1e-2};
  double horizon = 100;
  unsigned boundary_grid = 1 << 14;
};

struct CpDpRow {
  double h, eps;
  bool cp, dp;
  double max_gap;  // sup distance between Euler and closed form up to exit
};

struct CpDpReport {
  bool cp;
  double exit_time;
  std::vector<CpDpRow> rows;

  // every cell with h <= h_max at the given eps matches the CP verdict
  bool agree(double h_max, double eps) const {
    for (auto& r : rows)
      if (r.h <= h_max * (1 + 1e-12) && r.eps == eps && r.dp != cp) return false;
    return true;
  }
};

namespace detail {

// first time the domain fails along the closed form, refined by bisection
inline double exit_time(const ClosedForm& sol, const BExprPtr& B, const CpDpCfg& cfg) {
  if (!eval_bexpr(B, sol(0))) return 0;
  double prev = 0;
  for (unsigned k = 1; k <= cfg.boundary_grid; ++k) {
    double t = cfg.horizon * k / cfg.boundary_grid;
    if (!eval_bexpr(B, sol(t))) {
      double lo = prev, hi = t;
      for (int i = 0; i < 80; ++i) {
        double mid = (lo + hi) / 2;
        (eval_bexpr(B, sol(mid)) ? lo : hi) = mid;
      }
      return hi;
    }
    prev = t;
  }
  throw EulerError("cp_dp: domain never exits within the horizon");
}

}  // namespace detail

// Evaluates the same ODE postcondition two ways: CP through the supplied
// closed-form solution, DP through Euler chains that step while B holds,
// judged robustly within eps.
inline CpDpReport cp_dp_experiment(const OdeField& f, const ClosedForm& sol, const BExprPtr& B,
                                   const BExprPtr& Q, const State& x0, const CpDpCfg& cfg = {}) {
  CpDpReport rep;
  rep.exit_time = detail::exit_time(sol, B, cfg);
  rep.cp = eval_bexpr(Q, sol(rep.exit_time));
  for (double h : cfg.hs) {
    // discrete chain: step while the domain holds at the current vertex
    State cur = x0;
    double t = 0, max_gap = 0;
    while (eval_bexpr(B, cur)) {
      if (t > cfg.horizon) throw EulerError("cp_dp: discrete chain exceeded the horizon");
      State d = ode_deriv(f, cur);
      for (auto& [x, v] : d) cur[x] += h * v;
      t += h;
      for (auto& [x, v] : sol(std::min(t, rep.exit_time)))
        max_gap = std::max(max_gap, std::abs(state_get(cur, x) - v));
    }
    for (double eps : cfg.epss) {
      bool robust_in = in_neg_eps(Q, cur, eps);
      bool robust_out = in_neg_eps(bnot(Q), cur, eps);
      // stabilized verdict: robustly Q, robustly not Q, or fall back to the
      // pointwise value
      bool dp = robust_in || (robust_out ? false : eval_bexpr(Q, cur));
      rep.rows.push_back({h, eps, rep.cp, dp, max_gap});
    }
  }
  return rep;
}

}  // namespace hcsp
