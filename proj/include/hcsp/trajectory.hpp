#pragma once

#include <cmath>
#include <memory>
#include <mutex>
#include <vector>

#include "hcsp/expr.hpp"

namespace hcsp {

using OdeField = std::vector<std::pair<std::string, ExprPtr>>;

inline State ode_deriv(const OdeField& field, const State& s) {
  State d;
  for (auto& [x, e] : field) d[x] = eval_expr(e, s);
  return d;
}

inline State rk4_step(const OdeField& field, const State& s, double h) {
  auto axpy = [](const State& base, const State& k, double c) {
    State out = base;
    for (auto& [x, v] : k) out[x] = state_get(base, x) + c * v;
    return out;
  };
  State k1 = ode_deriv(field, s);
  State k2 = ode_deriv(field, axpy(s, k1, h / 2));
  State k3 = ode_deriv(field, axpy(s, k2, h / 2));
  State k4 = ode_deriv(field, axpy(s, k3, h));
  State out = s;
  for (auto& [x, v] : k1)
    out[x] = state_get(s, x) + h / 6 * (v + 2 * k2[x] + 2 * k3[x] + k4[x]);
  return out;
}

// A state trajectory on [0, d]. ODE solutions use closed forms when each
// equation is affine in its own variable alone, RK4 otherwise.
struct Trajectory;
using TrajPtr = std::shared_ptr<const Trajectory>;

struct Trajectory {
  enum class Kind { Const, OdeSol, Shift, Merge, Glued };
  Kind kind;
  State init;                       // Const: the state; OdeSol: initial state
  OdeField field;                   // OdeSol
  TrajPtr base;                     // Shift, Glued (first piece)
  double shift = 0.0;               // Shift offset; Glued: duration of first piece
  TrajPtr other;                    // Merge (right), Glued (second piece)
  double step = 1e-3;               // RK4 step for numeric fallback

  // closed-form coefficients per ODE variable: dx = a*x + b, valid when ok
  struct Affine {
    bool ok = false;
    double a = 0, b = 0;
  };
  mutable std::vector<Affine> affine_;
  mutable bool affine_checked_ = false;
  mutable std::vector<State> grid_;  // RK4 cache at multiples of step
  mutable std::mutex mu_;
};

inline TrajPtr traj_const(State s) {
  auto t = std::make_shared<Trajectory>();
  t->kind = Trajectory::Kind::Const;
  t->init = std::move(s);
  return t;
}

inline TrajPtr traj_ode(OdeField field, State init, double step = 1e-3) {
  auto t = std::make_shared<Trajectory>();
  t->kind = Trajectory::Kind::OdeSol;
  t->field = std::move(field);
  t->init = std::move(init);
  t->step = step;
  return t;
}

inline TrajPtr traj_shift(TrajPtr base, double d) {
  if (d == 0.0) return base;
  if (base->kind == Trajectory::Kind::Shift) {
    d += base->shift;
    base = base->base;
  }
  auto t = std::make_shared<Trajectory>();
  t->kind = Trajectory::Kind::Shift;
  t->base = std::move(base);
  t->shift = d;
  return t;
}

inline TrajPtr traj_merge(TrajPtr left, TrajPtr right) {
  auto t = std::make_shared<Trajectory>();
  t->kind = Trajectory::Kind::Merge;
  t->base = std::move(left);
  t->other = std::move(right);
  return t;
}

inline TrajPtr traj_glued(TrajPtr first, double d1, TrajPtr second) {
  auto t = std::make_shared<Trajectory>();
  t->kind = Trajectory::Kind::Glued;
  t->base = std::move(first);
  t->shift = d1;
  t->other = std::move(second);
  return t;
}

namespace detail {

inline void check_affine(const Trajectory& t) {
  std::lock_guard<std::mutex> lk(t.mu_);
  if (t.affine_checked_) return;
  t.affine_checked_ = true;
  t.affine_.resize(t.field.size());
  for (size_t i = 0; i < t.field.size(); ++i) {
    auto& [xi, e] = t.field[i];
    std::set<std::string> vs;
    expr_vars(e, vs);
    bool self_only = true;
    for (auto& [xj, ej] : t.field)
      if (xj != xi && vs.count(xj)) self_only = false;
    if (!self_only) return;  // coupled: leave all not-ok, use RK4
    State probe = t.init;
    auto at = [&](double v) {
      probe[xi] = v;
      return eval_expr(e, probe);
    };
    double b = at(0), ab = at(1), a = ab - b;
    if (std::abs(at(2) - (2 * a + b)) > 1e-9 * (1 + std::abs(b)) ||
        std::abs(at(3) - (3 * a + b)) > 1e-9 * (1 + std::abs(b)))
      return;
    t.affine_[i] = {true, a, b};
  }
}

inline State ode_numeric(const Trajectory& t, double time) {
  std::lock_guard<std::mutex> lk(t.mu_);
  if (t.grid_.empty()) t.grid_.push_back(t.init);
  size_t n = static_cast<size_t>(std::floor(time / t.step + 1e-12));
  while (t.grid_.size() <= n)
    t.grid_.push_back(rk4_step(t.field, t.grid_.back(), t.step));
  State s = t.grid_[n];
  double rem = time - static_cast<double>(n) * t.step;
  if (rem > 1e-15) s = rk4_step(t.field, s, rem);
  return s;
}

}  // namespace detail

inline State traj_eval(const TrajPtr& tp, double time) {
  const Trajectory& t = *tp;
  switch (t.kind) {
    case Trajectory::Kind::Const: return t.init;
    case Trajectory::Kind::Shift: return traj_eval(t.base, time + t.shift);
    case Trajectory::Kind::Merge: {
      State s = traj_eval(t.base, time);
      for (auto& [x, v] : traj_eval(t.other, time)) s[x] = v;
      return s;
    }
    case Trajectory::Kind::Glued:
      if (time <= t.shift) return traj_eval(t.base, time);
      return traj_eval(t.other, time - t.shift);
    case Trajectory::Kind::OdeSol: {
      if (time == 0.0) return t.init;
      detail::check_affine(t);
      bool all_ok = !t.field.empty();
      for (auto& af : t.affine_)
        if (!af.ok) all_ok = false;
      if (!all_ok) return detail::ode_numeric(t, time);
      State s = t.init;
      for (size_t i = 0; i < t.field.size(); ++i) {
        auto& af = t.affine_[i];
        double x0 = state_get(t.init, t.field[i].first);
        double val;
        if (std::abs(af.a) < 1e-300) {
          val = x0 + af.b * time;
        } else {
          val = (x0 + af.b / af.a) * std::exp(af.a * time) - af.b / af.a;
        }
        s[t.field[i].first] = val;
      }
      return s;
    }
  }
  throw std::logic_error("traj_eval: bad kind");
}

}  // namespace hcsp
