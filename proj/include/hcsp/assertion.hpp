#pragma once

// Assertion language over states and traces: value terms (including trajectory
// lookups), trajectory terms, trace terms with the distinguished variable gamma,
// and formulas with sampled three-valued evaluation.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hcsp/expr.hpp"
#include "hcsp/pretty.hpp"
#include "hcsp/sync.hpp"
#include "hcsp/trace.hpp"
#include "hcsp/trajectory.hpp"

namespace hcsp {

struct EvalError : std::runtime_error {
  explicit EvalError(const std::string& m) : std::runtime_error(m) {}
};

// ---------------------------------------------------------------------------
// Terms

struct VTerm;
struct TrajTerm;
struct TraceTerm;
using VTermPtr = std::shared_ptr<const VTerm>;
using TrajTermPtr = std::shared_ptr<const TrajTerm>;
using TraceTermPtr = std::shared_ptr<const TraceTerm>;

// Value/time term. `Name` resolves through the valuation first, then the state.
struct VTerm {
  enum class Kind { Const, Inf, Name, Add, Sub, Mul, Div, Neg, TrajAt };
  Kind kind;
  Rat value;             // Const
  std::string name;      // Name; TrajAt component
  VTermPtr a, b;         // binary ops; Neg uses a; TrajAt time in a
  TrajTermPtr traj;      // TrajAt
};

inline VTermPtr vconst(Rat v) {
  return std::make_shared<VTerm>(VTerm{.kind = VTerm::Kind::Const, .value = std::move(v)});
}
inline VTermPtr vconst(double v) { return vconst(rat_from_double(v)); }
inline VTermPtr vconst(long long v) { return vconst(rat(v)); }
inline VTermPtr vinf() { return std::make_shared<VTerm>(VTerm{.kind = VTerm::Kind::Inf}); }
inline VTermPtr vname(std::string x) {
  return std::make_shared<VTerm>(VTerm{.kind = VTerm::Kind::Name, .name = std::move(x)});
}
inline VTermPtr vbin(VTerm::Kind k, VTermPtr a, VTermPtr b) {
  return std::make_shared<VTerm>(VTerm{.kind = k, .a = std::move(a), .b = std::move(b)});
}
inline VTermPtr vadd(VTermPtr a, VTermPtr b) { return vbin(VTerm::Kind::Add, std::move(a), std::move(b)); }
inline VTermPtr vsub(VTermPtr a, VTermPtr b) { return vbin(VTerm::Kind::Sub, std::move(a), std::move(b)); }
inline VTermPtr vmul(VTermPtr a, VTermPtr b) { return vbin(VTerm::Kind::Mul, std::move(a), std::move(b)); }
inline VTermPtr vdiv(VTermPtr a, VTermPtr b) { return vbin(VTerm::Kind::Div, std::move(a), std::move(b)); }
inline VTermPtr vneg(VTermPtr a) {
  return std::make_shared<VTerm>(VTerm{.kind = VTerm::Kind::Neg, .a = std::move(a)});
}
inline VTermPtr vtrajat(TrajTermPtr p, VTermPtr t, std::string comp) {
  return std::make_shared<VTerm>(
      VTerm{.kind = VTerm::Kind::TrajAt, .name = std::move(comp), .a = std::move(t), .traj = std::move(p)});
}

inline VTermPtr vterm_of_expr(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Const: return vconst(e->value);
    case Expr::Kind::Var: return vname(e->name);
    case Expr::Kind::Add: return vadd(vterm_of_expr(e->lhs), vterm_of_expr(e->rhs));
    case Expr::Kind::Sub: return vsub(vterm_of_expr(e->lhs), vterm_of_expr(e->rhs));
    case Expr::Kind::Mul: return vmul(vterm_of_expr(e->lhs), vterm_of_expr(e->rhs));
    case Expr::Kind::Div: return vdiv(vterm_of_expr(e->lhs), vterm_of_expr(e->rhs));
    case Expr::Kind::Neg: return vneg(vterm_of_expr(e->lhs));
  }
  throw EvalError("bad expr kind");
}

// Converts a pure arithmetic term back to an Expr (fails on trajectory lookups).
inline ExprPtr expr_of_vterm(const VTermPtr& t) {
  switch (t->kind) {
    case VTerm::Kind::Const: return econst(t->value);
    case VTerm::Kind::Name: return evar(t->name);
    case VTerm::Kind::Add: return eadd(expr_of_vterm(t->a), expr_of_vterm(t->b));
    case VTerm::Kind::Sub: return esub(expr_of_vterm(t->a), expr_of_vterm(t->b));
    case VTerm::Kind::Mul: return emul(expr_of_vterm(t->a), expr_of_vterm(t->b));
    case VTerm::Kind::Div: return ediv(expr_of_vterm(t->a), expr_of_vterm(t->b));
    case VTerm::Kind::Neg: return eneg(expr_of_vterm(t->a));
    default: throw EvalError("term has no expression form");
  }
}

// Trajectory term: the constant trajectory at given component values, a flow of
// an ODE field from symbolic initial values, or a concrete trajectory literal.
struct TrajTerm {
  enum class Kind { ConstT, OdeT, LitT };
  Kind kind;
  std::map<std::string, VTermPtr> init;  // ConstT components / OdeT initial values
  OdeField field;                        // OdeT
  TrajPtr lit;                           // LitT
};

inline TrajTermPtr tconst_traj(std::map<std::string, VTermPtr> init) {
  return std::make_shared<TrajTerm>(TrajTerm{.kind = TrajTerm::Kind::ConstT, .init = std::move(init)});
}
inline TrajTermPtr tode_traj(OdeField field, std::map<std::string, VTermPtr> init) {
  return std::make_shared<TrajTerm>(
      TrajTerm{.kind = TrajTerm::Kind::OdeT, .init = std::move(init), .field = std::move(field)});
}
inline TrajTermPtr tlit_traj(TrajPtr p) {
  return std::make_shared<TrajTerm>(TrajTerm{.kind = TrajTerm::Kind::LitT, .lit = std::move(p)});
}

// The identity trajectory over the named state variables (constant at their
// current symbolic values).
inline TrajTermPtr tid_traj(const std::set<std::string>& vars) {
  std::map<std::string, VTermPtr> init;
  for (auto& x : vars) init[x] = vname(x);
  return tconst_traj(std::move(init));
}

// Trace term.
struct TraceTerm {
  enum class Kind { EmptyT, GammaT, VarT, CommT, WaitT, ConcatT, DeltaT, LitT };
  Kind kind;
  std::string name;   // VarT
  std::string ch;     // CommT
  Dir dir = Dir::Sync;
  VTermPtr value;     // CommT
  VTermPtr dur;       // WaitT (Inf term for unbounded waits)
  TrajTermPtr traj;   // WaitT
  RdySet rdy;         // WaitT
  TraceTermPtr t1, t2;  // ConcatT
  Trace lit;          // LitT
};

inline TraceTermPtr tempty() {
  return std::make_shared<TraceTerm>(TraceTerm{.kind = TraceTerm::Kind::EmptyT});
}
inline TraceTermPtr tgamma() {
  return std::make_shared<TraceTerm>(TraceTerm{.kind = TraceTerm::Kind::GammaT});
}
inline TraceTermPtr tvar(std::string name) {
  return std::make_shared<TraceTerm>(TraceTerm{.kind = TraceTerm::Kind::VarT, .name = std::move(name)});
}
inline TraceTermPtr tcomm(std::string ch, Dir dir, VTermPtr v) {
  return std::make_shared<TraceTerm>(
      TraceTerm{.kind = TraceTerm::Kind::CommT, .ch = std::move(ch), .dir = dir, .value = std::move(v)});
}
inline TraceTermPtr twait(VTermPtr dur, TrajTermPtr traj, RdySet rdy) {
  return std::make_shared<TraceTerm>(TraceTerm{
      .kind = TraceTerm::Kind::WaitT, .dur = std::move(dur), .traj = std::move(traj), .rdy = std::move(rdy)});
}
inline TraceTermPtr tconcat(TraceTermPtr a, TraceTermPtr b) {
  return std::make_shared<TraceTerm>(
      TraceTerm{.kind = TraceTerm::Kind::ConcatT, .t1 = std::move(a), .t2 = std::move(b)});
}
inline TraceTermPtr tdelta() {
  return std::make_shared<TraceTerm>(TraceTerm{.kind = TraceTerm::Kind::DeltaT});
}
inline TraceTermPtr tlit(Trace t) {
  return std::make_shared<TraceTerm>(TraceTerm{.kind = TraceTerm::Kind::LitT, .lit = std::move(t)});
}

// ---------------------------------------------------------------------------
// Formulas

struct Assertion;
using AssnPtr = std::shared_ptr<const Assertion>;

// Quantified reals carry a sort: Value quantifiers without explicit bounds range
// over the configured finite value domain (exhaustively), Time quantifiers over
// a sampled time window.
enum class RealSort { Value, Time };

struct Assertion {
  enum class Kind {
    TrueA, FalseA,
    Cmp,        // op t1 t2
    TraceEq,    // tr1 = tr2
    Not, And, Or, Implies,
    ForallReal, ExistsReal,    // name, sort, optional bounds in lo/hi
    ForallTrace, ExistsTrace,  // name
    Chop,       // a @ b over subject
    TrInv,      // subject is one wait of duration dur whose trajectory satisfies inv
    SyncAtom    // tr1 ||cs tr2 admits out
  };
  Kind kind;
  BExpr::Op op = BExpr::Op::Eq;  // Cmp
  VTermPtr t1, t2;               // Cmp; TrInv duration in t1
  TraceTermPtr tr1, tr2;         // TraceEq; SyncAtom inputs
  AssnPtr a, b;                  // connectives; quantifier body in a
  std::string name;              // quantified variable
  VTermPtr lo, hi;               // real quantifier bounds (may be null)
  bool lo_strict = false, hi_strict = false;
  TraceTermPtr subject;          // Chop / TrInv subject trace term
  BExprPtr inv;                  // TrInv
  RdySet rdy;                    // TrInv
  std::set<std::string> cs;      // SyncAtom
  TraceTermPtr out;              // SyncAtom expected result
  // Optional sampling hint for time quantifiers: the domain-exit instant of
  // this flow is a distinguished candidate value.
  TrajTermPtr hint_traj;
  BExprPtr hint_domain;
  // Set on time quantifiers whose body can only hold when the bound variable
  // equals a harvested candidate (trace wait durations, evaluable body
  // durations, boundary hints); the sampled verdict is then definite.
  bool time_complete = false;
};

inline AssnPtr atrue() { return std::make_shared<Assertion>(Assertion{.kind = Assertion::Kind::TrueA}); }
inline AssnPtr afalse() { return std::make_shared<Assertion>(Assertion{.kind = Assertion::Kind::FalseA}); }
inline AssnPtr acmp(BExpr::Op op, VTermPtr a, VTermPtr b) {
  return std::make_shared<Assertion>(
      Assertion{.kind = Assertion::Kind::Cmp, .op = op, .t1 = std::move(a), .t2 = std::move(b)});
}
inline AssnPtr atrace_eq(TraceTermPtr a, TraceTermPtr b) {
  return std::make_shared<Assertion>(
      Assertion{.kind = Assertion::Kind::TraceEq, .tr1 = std::move(a), .tr2 = std::move(b)});
}
inline AssnPtr anot(AssnPtr a) {
  return std::make_shared<Assertion>(Assertion{.kind = Assertion::Kind::Not, .a = std::move(a)});
}
inline AssnPtr aand(AssnPtr a, AssnPtr b) {
  return std::make_shared<Assertion>(
      Assertion{.kind = Assertion::Kind::And, .a = std::move(a), .b = std::move(b)});
}
inline AssnPtr aor(AssnPtr a, AssnPtr b) {
  return std::make_shared<Assertion>(
      Assertion{.kind = Assertion::Kind::Or, .a = std::move(a), .b = std::move(b)});
}
inline AssnPtr aimplies(AssnPtr a, AssnPtr b) {
  return std::make_shared<Assertion>(
      Assertion{.kind = Assertion::Kind::Implies, .a = std::move(a), .b = std::move(b)});
}
inline AssnPtr aquant(Assertion::Kind k, std::string name, RealSort sort, AssnPtr body,
                      VTermPtr lo = nullptr, bool lo_strict = false, VTermPtr hi = nullptr,
                      bool hi_strict = false) {
  auto r = std::make_shared<Assertion>(Assertion{.kind = k, .a = std::move(body), .name = std::move(name),
                                                 .lo = std::move(lo), .hi = std::move(hi),
                                                 .lo_strict = lo_strict, .hi_strict = hi_strict});
  const_cast<Assertion&>(*r).op = sort == RealSort::Value ? BExpr::Op::Eq : BExpr::Op::Lt;
  return r;
}
inline AssnPtr with_hint(const AssnPtr& q, TrajTermPtr traj, BExprPtr dom) {
  auto r = std::make_shared<Assertion>(*q);
  r->hint_traj = std::move(traj);
  r->hint_domain = std::move(dom);
  return r;
}
inline RealSort quant_sort(const Assertion& a) {
  return a.op == BExpr::Op::Eq ? RealSort::Value : RealSort::Time;
}
inline AssnPtr aforall_val(std::string name, AssnPtr body) {
  return aquant(Assertion::Kind::ForallReal, std::move(name), RealSort::Value, std::move(body));
}
inline AssnPtr aexists_val(std::string name, AssnPtr body) {
  return aquant(Assertion::Kind::ExistsReal, std::move(name), RealSort::Value, std::move(body));
}
// forall d > lo (time sort, strict lower bound, sampled upper window)
inline AssnPtr aforall_time(std::string name, VTermPtr lo, AssnPtr body) {
  return aquant(Assertion::Kind::ForallReal, std::move(name), RealSort::Time, std::move(body),
                std::move(lo), true);
}
inline AssnPtr aexists_time(std::string name, VTermPtr lo, AssnPtr body) {
  return aquant(Assertion::Kind::ExistsReal, std::move(name), RealSort::Time, std::move(body),
                std::move(lo), true);
}
inline AssnPtr aforall_range(std::string name, VTermPtr lo, bool los, VTermPtr hi, bool his,
                             AssnPtr body) {
  return aquant(Assertion::Kind::ForallReal, std::move(name), RealSort::Time, std::move(body),
                std::move(lo), los, std::move(hi), his);
}
inline AssnPtr aexists_trace(std::string name, AssnPtr body) {
  return std::make_shared<Assertion>(
      Assertion{.kind = Assertion::Kind::ExistsTrace, .a = std::move(body), .name = std::move(name)});
}
inline AssnPtr aforall_trace(std::string name, AssnPtr body) {
  return std::make_shared<Assertion>(
      Assertion{.kind = Assertion::Kind::ForallTrace, .a = std::move(body), .name = std::move(name)});
}
inline AssnPtr achop(AssnPtr p, AssnPtr q, TraceTermPtr subject = nullptr) {
  return std::make_shared<Assertion>(Assertion{.kind = Assertion::Kind::Chop, .a = std::move(p),
                                               .b = std::move(q),
                                               .subject = subject ? std::move(subject) : tgamma()});
}
inline AssnPtr atrinv(VTermPtr dur, BExprPtr inv, RdySet rdy, TraceTermPtr subject = nullptr) {
  return std::make_shared<Assertion>(Assertion{.kind = Assertion::Kind::TrInv, .t1 = std::move(dur),
                                               .subject = subject ? std::move(subject) : tgamma(),
                                               .inv = std::move(inv), .rdy = std::move(rdy)});
}
inline AssnPtr async_atom(TraceTermPtr tr1, std::set<std::string> cs, TraceTermPtr tr2,
                          TraceTermPtr out) {
  return std::make_shared<Assertion>(Assertion{.kind = Assertion::Kind::SyncAtom, .tr1 = std::move(tr1),
                                               .tr2 = std::move(tr2), .cs = std::move(cs),
                                               .out = std::move(out)});
}

// Lifts a boolean state expression into an assertion.
inline AssnPtr assn_of_bexpr(const BExprPtr& b) {
  switch (b->kind) {
    case BExpr::Kind::True: return atrue();
    case BExpr::Kind::False: return afalse();
    case BExpr::Kind::Cmp: return acmp(b->op, vterm_of_expr(b->lhs), vterm_of_expr(b->rhs));
    case BExpr::Kind::Not: return anot(assn_of_bexpr(b->b1));
    case BExpr::Kind::And: return aand(assn_of_bexpr(b->b1), assn_of_bexpr(b->b2));
    case BExpr::Kind::Or: return aor(assn_of_bexpr(b->b1), assn_of_bexpr(b->b2));
  }
  throw EvalError("bad bexpr kind");
}

// ---------------------------------------------------------------------------
// Abbreviations

inline AssnPtr emp_assn() { return atrace_eq(tgamma(), tempty()); }
inline AssnPtr io_assn(const std::string& ch, VTermPtr v) {
  return atrace_eq(tgamma(), tcomm(ch, Dir::Sync, std::move(v)));
}
inline AssnPtr traj_assn(VTermPtr d, TrajTermPtr p, RdySet rdy) {
  return atrace_eq(tgamma(), twait(std::move(d), std::move(p), std::move(rdy)));
}
inline AssnPtr trout_assn(VTermPtr d, TrajTermPtr p, const std::string& ch, VTermPtr v, RdySet rdy) {
  return atrace_eq(tgamma(), tconcat(twait(std::move(d), std::move(p), std::move(rdy)),
                                     tcomm(ch, Dir::Out, std::move(v))));
}

namespace detail {
inline AssnPtr comm_closure(TrajTermPtr I, const std::string& ch, Dir dir, VTermPtr v, RdySet rdy) {
  auto now = atrace_eq(tgamma(), tcomm(ch, dir, v));
  auto delayed = aexists_time(
      "$d", vconst(0ll),
      atrace_eq(tgamma(), tconcat(twait(vname("$d"), I, rdy), tcomm(ch, dir, v))));
  // gamma must start with a wait of exactly duration d, so trace-harvested
  // candidates are exhaustive
  const_cast<Assertion&>(*delayed).time_complete = true;
  auto forever = atrace_eq(tgamma(), twait(vinf(), I, rdy));
  return aor(std::move(now), aor(std::move(delayed), std::move(forever)));
}
}  // namespace detail

inline AssnPtr in_assn(TrajTermPtr I, const std::string& ch, VTermPtr v, RdySet rdy = {}) {
  if (rdy.empty()) rdy = {{ch, Dir::In}};
  return detail::comm_closure(std::move(I), ch, Dir::In, std::move(v), std::move(rdy));
}
inline AssnPtr out_assn(TrajTermPtr I, const std::string& ch, VTermPtr v, RdySet rdy = {}) {
  if (rdy.empty()) rdy = {{ch, Dir::Out}};
  return detail::comm_closure(std::move(I), ch, Dir::Out, std::move(v), std::move(rdy));
}

// ---------------------------------------------------------------------------
// Substitution

// Simultaneous substitution of state variables by value terms. Replacement
// terms are inserted verbatim (no re-substitution), so trajectory lookups built
// from the pre-substitution variables stay intact.
using VSubst = std::map<std::string, VTermPtr>;

inline VTermPtr subst_vterm(const VTermPtr& t, const VSubst& m);
inline TrajTermPtr subst_trajterm(const TrajTermPtr& p, const VSubst& m);
inline TraceTermPtr subst_traceterm(const TraceTermPtr& t, const VSubst& m);

inline VTermPtr subst_vterm(const VTermPtr& t, const VSubst& m) {
  switch (t->kind) {
    case VTerm::Kind::Const:
    case VTerm::Kind::Inf: return t;
    case VTerm::Kind::Name: {
      auto it = m.find(t->name);
      return it == m.end() ? t : it->second;
    }
    case VTerm::Kind::Neg: return vneg(subst_vterm(t->a, m));
    case VTerm::Kind::TrajAt:
      return vtrajat(subst_trajterm(t->traj, m), subst_vterm(t->a, m), t->name);
    default: return vbin(t->kind, subst_vterm(t->a, m), subst_vterm(t->b, m));
  }
}

inline TrajTermPtr subst_trajterm(const TrajTermPtr& p, const VSubst& m) {
  if (p->kind == TrajTerm::Kind::LitT) return p;
  std::map<std::string, VTermPtr> init;
  for (auto& [x, v] : p->init) init[x] = subst_vterm(v, m);
  if (p->kind == TrajTerm::Kind::ConstT) return tconst_traj(std::move(init));
  return tode_traj(p->field, std::move(init));
}

inline TraceTermPtr subst_traceterm(const TraceTermPtr& t, const VSubst& m) {
  switch (t->kind) {
    case TraceTerm::Kind::EmptyT:
    case TraceTerm::Kind::GammaT:
    case TraceTerm::Kind::VarT:
    case TraceTerm::Kind::DeltaT:
    case TraceTerm::Kind::LitT: return t;
    case TraceTerm::Kind::CommT: return tcomm(t->ch, t->dir, subst_vterm(t->value, m));
    case TraceTerm::Kind::WaitT:
      return twait(subst_vterm(t->dur, m), subst_trajterm(t->traj, m), t->rdy);
    case TraceTerm::Kind::ConcatT:
      return tconcat(subst_traceterm(t->t1, m), subst_traceterm(t->t2, m));
  }
  throw EvalError("bad trace term kind");
}

inline AssnPtr subst_vars(const AssnPtr& a, const VSubst& m) {
  if (m.empty()) return a;
  switch (a->kind) {
    case Assertion::Kind::TrueA:
    case Assertion::Kind::FalseA: return a;
    case Assertion::Kind::Cmp:
      return acmp(a->op, subst_vterm(a->t1, m), subst_vterm(a->t2, m));
    case Assertion::Kind::TraceEq:
      return atrace_eq(subst_traceterm(a->tr1, m), subst_traceterm(a->tr2, m));
    case Assertion::Kind::Not: return anot(subst_vars(a->a, m));
    case Assertion::Kind::And: return aand(subst_vars(a->a, m), subst_vars(a->b, m));
    case Assertion::Kind::Or: return aor(subst_vars(a->a, m), subst_vars(a->b, m));
    case Assertion::Kind::Implies: return aimplies(subst_vars(a->a, m), subst_vars(a->b, m));
    case Assertion::Kind::ForallReal:
    case Assertion::Kind::ExistsReal: {
      VSubst inner = m;
      inner.erase(a->name);  // shadowed binder
      AssnPtr r = aquant(a->kind, a->name, quant_sort(*a), subst_vars(a->a, inner),
                         a->lo ? subst_vterm(a->lo, m) : nullptr, a->lo_strict,
                         a->hi ? subst_vterm(a->hi, m) : nullptr, a->hi_strict);
      if (a->hint_traj) r = with_hint(r, subst_trajterm(a->hint_traj, m), a->hint_domain);
      const_cast<Assertion&>(*r).time_complete = a->time_complete;
      return r;
    }
    case Assertion::Kind::ForallTrace:
      return aforall_trace(a->name, subst_vars(a->a, m));
    case Assertion::Kind::ExistsTrace:
      return aexists_trace(a->name, subst_vars(a->a, m));
    case Assertion::Kind::Chop:
      return achop(subst_vars(a->a, m), subst_vars(a->b, m), subst_traceterm(a->subject, m));
    case Assertion::Kind::TrInv: {
      BExprPtr inv = a->inv;
      for (auto& [x, v] : m) inv = subst_bexpr(inv, x, expr_of_vterm(v));
      return atrinv(subst_vterm(a->t1, m), inv, a->rdy, subst_traceterm(a->subject, m));
    }
    case Assertion::Kind::SyncAtom:
      return async_atom(subst_traceterm(a->tr1, m), a->cs, subst_traceterm(a->tr2, m),
                        subst_traceterm(a->out, m));
  }
  throw EvalError("bad assertion kind");
}

inline AssnPtr subst_var(const AssnPtr& a, const std::string& x, const VTermPtr& v) {
  return subst_vars(a, VSubst{{x, v}});
}
inline AssnPtr subst_var(const AssnPtr& a, const std::string& x, const ExprPtr& e) {
  return subst_var(a, x, vterm_of_expr(e));
}

// Replacing gamma. Chop and TrInv rewrite only their subject: their operand
// formulas speak about the pieces of the subject, not the ambient trace.
inline TraceTermPtr subst_gamma_tt(const TraceTermPtr& t, const TraceTermPtr& repl) {
  switch (t->kind) {
    case TraceTerm::Kind::GammaT: return repl;
    case TraceTerm::Kind::ConcatT:
      return tconcat(subst_gamma_tt(t->t1, repl), subst_gamma_tt(t->t2, repl));
    default: return t;
  }
}

inline AssnPtr subst_gamma(const AssnPtr& a, const TraceTermPtr& repl) {
  switch (a->kind) {
    case Assertion::Kind::TrueA:
    case Assertion::Kind::FalseA:
    case Assertion::Kind::Cmp: return a;
    case Assertion::Kind::TraceEq:
      return atrace_eq(subst_gamma_tt(a->tr1, repl), subst_gamma_tt(a->tr2, repl));
    case Assertion::Kind::Not: return anot(subst_gamma(a->a, repl));
    case Assertion::Kind::And: return aand(subst_gamma(a->a, repl), subst_gamma(a->b, repl));
    case Assertion::Kind::Or: return aor(subst_gamma(a->a, repl), subst_gamma(a->b, repl));
    case Assertion::Kind::Implies:
      return aimplies(subst_gamma(a->a, repl), subst_gamma(a->b, repl));
    case Assertion::Kind::ForallReal:
    case Assertion::Kind::ExistsReal: {
      AssnPtr r = aquant(a->kind, a->name, quant_sort(*a), subst_gamma(a->a, repl), a->lo,
                         a->lo_strict, a->hi, a->hi_strict);
      if (a->hint_traj) r = with_hint(r, a->hint_traj, a->hint_domain);
      const_cast<Assertion&>(*r).time_complete = a->time_complete;
      return r;
    }
    case Assertion::Kind::ForallTrace:
      return aforall_trace(a->name, subst_gamma(a->a, repl));
    case Assertion::Kind::ExistsTrace:
      return aexists_trace(a->name, subst_gamma(a->a, repl));
    case Assertion::Kind::Chop:
      return achop(a->a, a->b, subst_gamma_tt(a->subject, repl));
    case Assertion::Kind::TrInv:
      return atrinv(a->t1, a->inv, a->rdy, subst_gamma_tt(a->subject, repl));
    case Assertion::Kind::SyncAtom:
      return async_atom(subst_gamma_tt(a->tr1, repl), a->cs, subst_gamma_tt(a->tr2, repl),
                        subst_gamma_tt(a->out, repl));
  }
  throw EvalError("bad assertion kind");
}

// ---------------------------------------------------------------------------
// Evaluation

enum class Tri { False, Unknown, True };

inline Tri tri_of(bool b) { return b ? Tri::True : Tri::False; }
inline Tri tri_not(Tri t) {
  return t == Tri::True ? Tri::False : t == Tri::False ? Tri::True : Tri::Unknown;
}
inline Tri tri_and(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False) return Tri::False;
  if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
  return Tri::True;
}
inline Tri tri_or(Tri a, Tri b) { return tri_not(tri_and(tri_not(a), tri_not(b))); }
inline const char* tri_str(Tri t) {
  return t == Tri::True ? "true" : t == Tri::False ? "false" : "unknown";
}

struct EvalCfg {
  std::vector<double> value_domain;  // exhaustive domain for unbounded value quantifiers
  double time_window = 10.0;         // sampling window for unbounded time quantifiers
  int samples = 64;                  // quasi-random samples per sampled quantifier
  int traj_samples = 16;             // samples per trajectory comparison / invariant check
  double tol = 1e-9;
  // When set, a sampled (non-exhaustive) universal with no counterexample counts
  // as true (and dually for existentials); otherwise such results are unknown.
  bool sampled_definite = false;
  std::vector<Trace> trace_pool;     // extra candidates for trace quantifiers
  bool trace_pool_complete = false;  // pool + sub-traces of h cover all candidates
  size_t sync_cap = 10000;
};

struct EvalEnv {
  State s;
  Trace h;
  std::map<std::string, double> reals;   // bound real/time variables
  std::map<std::string, Trace> traces;   // bound trace variables
};

inline double eval_vterm(const VTermPtr& t, const EvalEnv& env);

inline TrajPtr eval_trajterm(const TrajTermPtr& p, const EvalEnv& env) {
  if (p->kind == TrajTerm::Kind::LitT) return p->lit;
  State init;
  for (auto& [x, v] : p->init) init[x] = eval_vterm(v, env);
  if (p->kind == TrajTerm::Kind::ConstT) return traj_const(init);
  return traj_ode(p->field, init);
}

inline double eval_vterm(const VTermPtr& t, const EvalEnv& env) {
  switch (t->kind) {
    case VTerm::Kind::Const: return to_double(t->value);
    case VTerm::Kind::Inf: return kInf;
    case VTerm::Kind::Name: {
      auto it = env.reals.find(t->name);
      if (it != env.reals.end()) return it->second;
      auto is = env.s.find(t->name);
      if (is != env.s.end()) return is->second;
      throw EvalError("unresolvable symbol: " + t->name);
    }
    case VTerm::Kind::Add: return eval_vterm(t->a, env) + eval_vterm(t->b, env);
    case VTerm::Kind::Sub: return eval_vterm(t->a, env) - eval_vterm(t->b, env);
    case VTerm::Kind::Mul: return eval_vterm(t->a, env) * eval_vterm(t->b, env);
    case VTerm::Kind::Div: return eval_vterm(t->a, env) / eval_vterm(t->b, env);
    case VTerm::Kind::Neg: return -eval_vterm(t->a, env);
    case VTerm::Kind::TrajAt: {
      auto p = eval_trajterm(t->traj, env);
      State st = traj_eval(p, eval_vterm(t->a, env));
      return state_get(st, t->name);
    }
  }
  throw EvalError("bad vterm kind");
}

inline Trace eval_traceterm(const TraceTermPtr& t, const EvalEnv& env) {
  switch (t->kind) {
    case TraceTerm::Kind::EmptyT: return Trace{};
    case TraceTerm::Kind::GammaT: return env.h;
    case TraceTerm::Kind::VarT: {
      auto it = env.traces.find(t->name);
      if (it == env.traces.end()) throw EvalError("unresolvable trace variable: " + t->name);
      return it->second;
    }
    case TraceTerm::Kind::CommT: {
      Trace out;
      out.events.push_back(comm_event(t->ch, t->dir, eval_vterm(t->value, env)));
      return out;
    }
    case TraceTerm::Kind::WaitT: {
      double d = eval_vterm(t->dur, env);
      if (d <= 0) throw EvalError("wait term with non-positive duration");
      Trace out;
      out.events.push_back(wait_event(d, eval_trajterm(t->traj, env), t->rdy));
      return out;
    }
    case TraceTerm::Kind::ConcatT:
      return trace_concat(eval_traceterm(t->t1, env), eval_traceterm(t->t2, env));
    case TraceTerm::Kind::DeltaT: return delta_trace();
    case TraceTerm::Kind::LitT: return t->lit;
  }
  throw EvalError("bad trace term kind");
}

namespace detail {

// Low-discrepancy points in (0,1): fractional parts of multiples of the golden ratio.
inline double golden_point(int k) {
  static const double phi = 0.6180339887498949;
  double v = (k + 1) * phi;
  return v - std::floor(v);
}

// Contiguous sub-traces of h (candidates for trace quantifiers).
inline std::vector<Trace> sub_traces(const Trace& h) {
  std::vector<Trace> out;
  size_t n = h.events.size();
  for (size_t i = 0; i <= n; ++i) {
    for (size_t j = i; j <= n; ++j) {
      Trace t;
      t.events.assign(h.events.begin() + i, h.events.begin() + j);
      t.delta = h.delta && j == n;
      out.push_back(std::move(t));
    }
  }
  if (h.delta) out.push_back(delta_trace());
  return out;
}

// Splits of t into prefix/suffix. Event-boundary splits always; additionally
// each wait event may be cut at any of the candidate offsets.
inline std::vector<std::pair<Trace, Trace>> trace_splits(const Trace& t,
                                                         const std::vector<double>& cuts) {
  std::vector<std::pair<Trace, Trace>> out;
  size_t n = t.events.size();
  for (size_t k = 0; k <= n; ++k) {
    Trace pre, post;
    pre.events.assign(t.events.begin(), t.events.begin() + k);
    post.events.assign(t.events.begin() + k, t.events.end());
    post.delta = t.delta;  // the deadlock marker stays with the suffix
    out.emplace_back(std::move(pre), std::move(post));
  }
  for (size_t k = 0; k < n; ++k) {
    const Event& e = t.events[k];
    if (e.kind != Event::Kind::Wait || e.dur == kInf) continue;
    for (double c : cuts) {
      if (!(c > 0) || !(c < e.dur)) continue;
      auto [head, tail] = detail::split_wait(e, c);
      Trace pre, post;
      pre.events.assign(t.events.begin(), t.events.begin() + k);
      pre.events.push_back(head);
      post.events.push_back(tail);
      post.events.insert(post.events.end(), t.events.begin() + k + 1, t.events.end());
      post.delta = t.delta;
      out.emplace_back(std::move(pre), std::move(post));
    }
  }
  return out;
}

// Candidate cut offsets: every evaluable duration term appearing in the formula.
inline void collect_cuts(const AssnPtr& a, const EvalEnv& env, std::vector<double>& out);

inline void collect_cuts_tt(const TraceTermPtr& t, const EvalEnv& env, std::vector<double>& out) {
  switch (t->kind) {
    case TraceTerm::Kind::WaitT:
      try {
        double d = eval_vterm(t->dur, env);
        if (d > 0 && d < kInf) out.push_back(d);
      } catch (const EvalError&) {}
      break;
    case TraceTerm::Kind::ConcatT:
      collect_cuts_tt(t->t1, env, out);
      collect_cuts_tt(t->t2, env, out);
      break;
    default: break;
  }
}

inline void collect_cuts(const AssnPtr& a, const EvalEnv& env, std::vector<double>& out) {
  switch (a->kind) {
    case Assertion::Kind::TraceEq:
      collect_cuts_tt(a->tr1, env, out);
      collect_cuts_tt(a->tr2, env, out);
      break;
    case Assertion::Kind::TrInv:
      try {
        double d = eval_vterm(a->t1, env);
        if (d > 0 && d < kInf) out.push_back(d);
      } catch (const EvalError&) {}
      break;
    case Assertion::Kind::Not:
    case Assertion::Kind::ForallReal:
    case Assertion::Kind::ExistsReal:
    case Assertion::Kind::ForallTrace:
    case Assertion::Kind::ExistsTrace:
      collect_cuts(a->a, env, out);
      break;
    case Assertion::Kind::And:
    case Assertion::Kind::Or:
    case Assertion::Kind::Implies:
    case Assertion::Kind::Chop:
      collect_cuts(a->a, env, out);
      collect_cuts(a->b, env, out);
      break;
    default: break;
  }
}

}  // namespace detail

inline Tri eval_assn(const AssnPtr& a, EvalEnv& env, const EvalCfg& cfg);

namespace detail {

inline Tri eval_cmp(BExpr::Op op, double x, double y, double tol) {
  switch (op) {
    case BExpr::Op::Lt: return tri_of(x < y);
    case BExpr::Op::Le: return tri_of(x <= y);
    case BExpr::Op::Gt: return tri_of(x > y);
    case BExpr::Op::Ge: return tri_of(x >= y);
    case BExpr::Op::Eq: return tri_of(std::abs(x - y) <= tol || (x == kInf && y == kInf));
    case BExpr::Op::Ne: return tri_of(!(std::abs(x - y) <= tol || (x == kInf && y == kInf)));
  }
  return Tri::Unknown;
}

// First instant in (0, window] where the domain fails along the trajectory,
// located by grid scan plus bisection; window if it holds throughout, 0 if it
// fails immediately.
inline double hint_boundary(const TrajPtr& traj, const BExprPtr& dom, double window) {
  if (!eval_bexpr(dom, traj_eval(traj, 0))) return 0;
  double step = window / 4096;
  double t = 0;
  while (t < window) {
    double next = std::min(t + step, window);
    if (!eval_bexpr(dom, traj_eval(traj, next))) {
      double lo = t, hi = next;
      while (hi - lo > 1e-12) {
        double mid = (lo + hi) / 2;
        (eval_bexpr(dom, traj_eval(traj, mid)) ? lo : hi) = mid;
      }
      return hi;
    }
    t = next;
  }
  return window;
}

inline Tri eval_real_quant(const AssnPtr& a, EvalEnv& env, const EvalCfg& cfg) {
  bool is_forall = a->kind == Assertion::Kind::ForallReal;
  std::vector<double> dom;
  bool exhaustive = false;
  double lo = a->lo ? eval_vterm(a->lo, env) : 0.0;
  if (a->hi) {
    double hi = eval_vterm(a->hi, env);
    if (!(hi > lo)) {
      // empty range
      return is_forall ? Tri::True : Tri::False;
    }
    if (!a->lo_strict) dom.push_back(lo);
    if (!a->hi_strict && hi < kInf) dom.push_back(hi);
    double width = (hi < kInf ? hi : lo + cfg.time_window) - lo;
    for (int k = 0; k < cfg.samples; ++k) dom.push_back(lo + golden_point(k) * width);
  } else if (quant_sort(*a) == RealSort::Value && !cfg.value_domain.empty()) {
    dom = cfg.value_domain;
    exhaustive = true;
  } else {
    if (!a->lo) lo = -cfg.time_window;
    double width = a->lo ? cfg.time_window : 2 * cfg.time_window;
    if (!a->lo_strict && a->lo) dom.push_back(lo);
    for (int k = 0; k < cfg.samples; ++k) dom.push_back(lo + golden_point(k) * width);
  }

  if (quant_sort(*a) == RealSort::Time) {
    // Durations visible in the trace or already evaluable in the body are
    // likely witnesses; try them exactly.
    std::vector<double> cand;
    if (a->hint_traj && a->hint_domain) {
      try {
        double b = hint_boundary(eval_trajterm(a->hint_traj, env), a->hint_domain,
                                 cfg.time_window);
        if (b > lo) {
          cand.push_back(b);
          for (int k = 0; k < cfg.samples; ++k) {
            double v = lo + golden_point(k) * (b - lo);
            if (v > lo) cand.push_back(v);
          }
        }
      } catch (const EvalError&) {}
    }
    for (auto& e : env.h.events)
      if (e.kind == Event::Kind::Wait && e.dur != kInf) cand.push_back(e.dur);
    collect_cuts(a->a, env, cand);
    double hi = a->hi ? eval_vterm(a->hi, env) : kInf;
    for (double c : cand) {
      bool above = a->lo_strict ? c > lo : c >= lo;
      bool below = a->hi_strict ? c < hi : c <= hi;
      if (above && below) dom.push_back(c);
    }
  }
  bool saw_unknown = false;
  auto saved = env.reals.find(a->name) != env.reals.end()
                   ? std::optional<double>(env.reals[a->name])
                   : std::nullopt;
  Tri verdict = is_forall ? Tri::True : Tri::False;
  for (double v : dom) {
    env.reals[a->name] = v;
    Tri r = eval_assn(a->a, env, cfg);
    if (is_forall && r == Tri::False) { verdict = Tri::False; goto done; }
    if (!is_forall && r == Tri::True) { verdict = Tri::True; goto done; }
    if (r == Tri::Unknown) saw_unknown = true;
  }
  if (saw_unknown || (!exhaustive && !cfg.sampled_definite && !a->time_complete))
    verdict = Tri::Unknown;
done:
  if (saved) env.reals[a->name] = *saved; else env.reals.erase(a->name);
  return verdict;
}

inline Tri eval_trace_quant(const AssnPtr& a, EvalEnv& env, const EvalCfg& cfg) {
  bool is_forall = a->kind == Assertion::Kind::ForallTrace;
  std::vector<Trace> dom = sub_traces(env.h);
  dom.insert(dom.end(), cfg.trace_pool.begin(), cfg.trace_pool.end());
  bool saw_unknown = false;
  auto saved = env.traces.find(a->name) != env.traces.end()
                   ? std::optional<Trace>(env.traces[a->name])
                   : std::nullopt;
  Tri verdict = is_forall ? Tri::True : Tri::False;
  for (auto& t : dom) {
    env.traces[a->name] = t;
    Tri r = eval_assn(a->a, env, cfg);
    if (is_forall && r == Tri::False) { verdict = Tri::False; goto done; }
    if (!is_forall && r == Tri::True) { verdict = Tri::True; goto done; }
    if (r == Tri::Unknown) saw_unknown = true;
  }
  if (saw_unknown || !cfg.trace_pool_complete) verdict = Tri::Unknown;
done:
  if (saved) env.traces[a->name] = *saved; else env.traces.erase(a->name);
  return verdict;
}

}  // namespace detail

inline Tri eval_assn(const AssnPtr& a, EvalEnv& env, const EvalCfg& cfg) {
  switch (a->kind) {
    case Assertion::Kind::TrueA: return Tri::True;
    case Assertion::Kind::FalseA: return Tri::False;
    case Assertion::Kind::Cmp:
      return detail::eval_cmp(a->op, eval_vterm(a->t1, env), eval_vterm(a->t2, env), cfg.tol);
    case Assertion::Kind::TraceEq: {
      Trace x = eval_traceterm(a->tr1, env);
      Trace y = eval_traceterm(a->tr2, env);
      return tri_of(trace_close(x, y, cfg.tol, cfg.traj_samples));
    }
    case Assertion::Kind::Not: return tri_not(eval_assn(a->a, env, cfg));
    case Assertion::Kind::And: {
      Tri l = eval_assn(a->a, env, cfg);
      if (l == Tri::False) return Tri::False;
      return tri_and(l, eval_assn(a->b, env, cfg));
    }
    case Assertion::Kind::Or: {
      Tri l = eval_assn(a->a, env, cfg);
      if (l == Tri::True) return Tri::True;
      return tri_or(l, eval_assn(a->b, env, cfg));
    }
    case Assertion::Kind::Implies: {
      Tri l = eval_assn(a->a, env, cfg);
      if (l == Tri::False) return Tri::True;
      return tri_or(tri_not(l), eval_assn(a->b, env, cfg));
    }
    case Assertion::Kind::ForallReal:
    case Assertion::Kind::ExistsReal: return detail::eval_real_quant(a, env, cfg);
    case Assertion::Kind::ForallTrace:
    case Assertion::Kind::ExistsTrace: return detail::eval_trace_quant(a, env, cfg);
    case Assertion::Kind::Chop: {
      Trace subj = eval_traceterm(a->subject, env);
      std::vector<double> cuts;
      detail::collect_cuts(a->a, env, cuts);
      detail::collect_cuts(a->b, env, cuts);
      bool saw_unknown = false;
      Trace saved_h = env.h;
      for (auto& [pre, post] : detail::trace_splits(subj, cuts)) {
        env.h = pre;
        Tri l = eval_assn(a->a, env, cfg);
        if (l == Tri::False) continue;
        env.h = post;
        Tri r = tri_and(l, eval_assn(a->b, env, cfg));
        if (r == Tri::True) { env.h = saved_h; return Tri::True; }
        if (r == Tri::Unknown) saw_unknown = true;
      }
      env.h = saved_h;
      return saw_unknown ? Tri::Unknown : Tri::False;
    }
    case Assertion::Kind::TrInv: {
      Trace subj = eval_traceterm(a->subject, env);
      if (subj.delta || subj.events.size() != 1) return Tri::False;
      const Event& e = subj.events[0];
      if (e.kind != Event::Kind::Wait) return Tri::False;
      double d = eval_vterm(a->t1, env);
      if (e.dur == kInf || d == kInf) {
        if (!(e.dur == kInf && d == kInf)) return Tri::False;
      } else if (std::abs(e.dur - d) > cfg.tol + 1e-9 * std::abs(d)) {
        return Tri::False;
      }
      if (e.rdy != a->rdy) return Tri::False;
      double span = e.dur == kInf ? cfg.time_window : e.dur;
      int n = std::max(cfg.traj_samples, 2);
      for (int k = 0; k <= n; ++k) {
        double t = span * k / n;
        if (!eval_bexpr(a->inv, traj_eval(e.traj, t))) return Tri::False;
      }
      return Tri::True;  // dense-sampling verdict
    }
    case Assertion::Kind::SyncAtom: {
      Trace x = eval_traceterm(a->tr1, env);
      Trace y = eval_traceterm(a->tr2, env);
      Trace o = eval_traceterm(a->out, env);
      return tri_of(sync_check(x, a->cs, y, o, cfg.sync_cap, cfg.tol));
    }
  }
  throw EvalError("bad assertion kind");
}

inline Tri eval_assn(const AssnPtr& a, const State& s, const Trace& h, const EvalCfg& cfg = {}) {
  EvalEnv env{s, h, {}, {}};
  return eval_assn(a, env, cfg);
}

// ---------------------------------------------------------------------------
// S-expression printing (deterministic, used for VC emission)

inline std::string vterm_sexp(const VTermPtr& t);
inline std::string trajterm_sexp(const TrajTermPtr& p);
inline std::string traceterm_sexp(const TraceTermPtr& t);

inline std::string vterm_sexp(const VTermPtr& t) {
  switch (t->kind) {
    case VTerm::Kind::Const: return rat_to_string(t->value);
    case VTerm::Kind::Inf: return "inf";
    case VTerm::Kind::Name: return t->name;
    case VTerm::Kind::Add: return "(+ " + vterm_sexp(t->a) + " " + vterm_sexp(t->b) + ")";
    case VTerm::Kind::Sub: return "(- " + vterm_sexp(t->a) + " " + vterm_sexp(t->b) + ")";
    case VTerm::Kind::Mul: return "(* " + vterm_sexp(t->a) + " " + vterm_sexp(t->b) + ")";
    case VTerm::Kind::Div: return "(/ " + vterm_sexp(t->a) + " " + vterm_sexp(t->b) + ")";
    case VTerm::Kind::Neg: return "(- " + vterm_sexp(t->a) + ")";
    case VTerm::Kind::TrajAt:
      return "(at " + trajterm_sexp(t->traj) + " " + vterm_sexp(t->a) + " " + t->name + ")";
  }
  return "?";
}

inline std::string trajterm_sexp(const TrajTermPtr& p) {
  std::string out;
  if (p->kind == TrajTerm::Kind::LitT) return "(traj-lit)";
  out = p->kind == TrajTerm::Kind::ConstT ? "(const-traj" : "(ode-traj";
  if (p->kind == TrajTerm::Kind::OdeT) {
    out += " (";
    for (size_t i = 0; i < p->field.size(); ++i) {
      if (i) out += " ";
      out += "(" + p->field[i].first + " " + pretty(p->field[i].second) + ")";
    }
    out += ")";
  }
  for (auto& [x, v] : p->init) out += " (" + x + " " + vterm_sexp(v) + ")";
  return out + ")";
}

inline std::string traceterm_sexp(const TraceTermPtr& t) {
  switch (t->kind) {
    case TraceTerm::Kind::EmptyT: return "eps";
    case TraceTerm::Kind::GammaT: return "gamma";
    case TraceTerm::Kind::VarT: return t->name;
    case TraceTerm::Kind::DeltaT: return "delta";
    case TraceTerm::Kind::LitT: return "(trace-lit " + trace_str(t->lit) + ")";
    case TraceTerm::Kind::CommT:
      return "(comm " + t->ch + std::string(1, char(t->dir)) + " " + vterm_sexp(t->value) + ")";
    case TraceTerm::Kind::WaitT:
      return "(wait " + vterm_sexp(t->dur) + " " + trajterm_sexp(t->traj) + " " + rdy_str(t->rdy) + ")";
    case TraceTerm::Kind::ConcatT:
      return "(^ " + traceterm_sexp(t->t1) + " " + traceterm_sexp(t->t2) + ")";
  }
  return "?";
}

inline std::string assn_sexp(const AssnPtr& a) {
  auto op_str = [](BExpr::Op op) {
    switch (op) {
      case BExpr::Op::Lt: return "<";
      case BExpr::Op::Le: return "<=";
      case BExpr::Op::Gt: return ">";
      case BExpr::Op::Ge: return ">=";
      case BExpr::Op::Eq: return "=";
      case BExpr::Op::Ne: return "distinct";
    }
    return "?";
  };
  switch (a->kind) {
    case Assertion::Kind::TrueA: return "true";
    case Assertion::Kind::FalseA: return "false";
    case Assertion::Kind::Cmp:
      return "(" + std::string(op_str(a->op)) + " " + vterm_sexp(a->t1) + " " + vterm_sexp(a->t2) + ")";
    case Assertion::Kind::TraceEq:
      return "(trace= " + traceterm_sexp(a->tr1) + " " + traceterm_sexp(a->tr2) + ")";
    case Assertion::Kind::Not: return "(not " + assn_sexp(a->a) + ")";
    case Assertion::Kind::And: return "(and " + assn_sexp(a->a) + " " + assn_sexp(a->b) + ")";
    case Assertion::Kind::Or: return "(or " + assn_sexp(a->a) + " " + assn_sexp(a->b) + ")";
    case Assertion::Kind::Implies: return "(=> " + assn_sexp(a->a) + " " + assn_sexp(a->b) + ")";
    case Assertion::Kind::ForallReal:
    case Assertion::Kind::ExistsReal: {
      std::string head = a->kind == Assertion::Kind::ForallReal ? "forall" : "exists";
      std::string sort = quant_sort(*a) == RealSort::Value ? "Value" : "Time";
      std::string bounds;
      if (a->lo) bounds += " :lo " + std::string(a->lo_strict ? "(open " : "(closed ") + vterm_sexp(a->lo) + ")";
      if (a->hi) bounds += " :hi " + std::string(a->hi_strict ? "(open " : "(closed ") + vterm_sexp(a->hi) + ")";
      return "(" + head + " ((" + a->name + " " + sort + "))" + bounds + " " + assn_sexp(a->a) + ")";
    }
    case Assertion::Kind::ForallTrace:
      return "(forall ((" + a->name + " Trace)) " + assn_sexp(a->a) + ")";
    case Assertion::Kind::ExistsTrace:
      return "(exists ((" + a->name + " Trace)) " + assn_sexp(a->a) + ")";
    case Assertion::Kind::Chop:
      return "(chop " + assn_sexp(a->a) + " " + assn_sexp(a->b) + " :subject " +
             traceterm_sexp(a->subject) + ")";
    case Assertion::Kind::TrInv:
      return "(trinv " + vterm_sexp(a->t1) + " " + pretty(a->inv) + " " + rdy_str(a->rdy) +
             " :subject " + traceterm_sexp(a->subject) + ")";
    case Assertion::Kind::SyncAtom: {
      std::string cs = "{";
      bool first = true;
      for (auto& c : a->cs) { if (!first) cs += ","; cs += c; first = false; }
      cs += "}";
      return "(sync " + traceterm_sexp(a->tr1) + " " + cs + " " + traceterm_sexp(a->tr2) + " " +
             traceterm_sexp(a->out) + ")";
    }
  }
  return "?";
}

}  // namespace hcsp
