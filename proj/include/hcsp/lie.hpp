#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hcsp/assertion.hpp"
#include "hcsp/poly.hpp"
#include "hcsp/trace.hpp"

namespace hcsp {

// Vector field with polynomial right-hand sides, keyed by variable.
using PolyField = std::map<std::string, Poly>;

inline PolyField poly_field(const OdeField& f) {
  PolyField out;
  for (auto& [x, e] : f) out[x] = poly_of_expr(e);
  return out;
}

// k-th Lie derivative of p along f. Variables without an equation in f are
// constant along the flow and contribute nothing.
inline Poly lie(const Poly& p, const PolyField& f, unsigned k = 1) {
  Poly cur = p;
  for (unsigned i = 0; i < k; ++i) {
    Poly next;
    for (auto& [x, fx] : f) next = padd(next, pmul(pderiv(cur, x), fx));
    cur = next;
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Invariant checks

enum class Verdict { ProvedExact, NoCounterexample, Refuted };

struct CheckResult {
  Verdict verdict;
  std::optional<State> witness;  // refuting point
  double value = 0;              // Lie derivative there
  bool vacuous = false;          // no grid point satisfied the premise
};

inline const char* verdict_str(Verdict v) {
  switch (v) {
    case Verdict::ProvedExact: return "proved-exact";
    case Verdict::NoCounterexample: return "no-counterexample";
    case Verdict::Refuted: return "refuted";
  }
  return "?";
}

// Grid used by the sampled (falsification-only) checks.
struct GridCfg {
  double lo = -2, hi = 2;
  unsigned points = 9;    // per axis
  double band = 0.05;     // |q| <= band counts as "on the surface"
  double margin = 1e-6;   // required decrease for barriers
  double tol = 1e-9;
};

namespace detail {

// Calls fn on every grid point over the variables of q, f and B.
template <typename Fn>
inline void grid_walk(const Poly& q, const PolyField& f, const BExprPtr& B, const GridCfg& cfg,
                      Fn&& fn) {
  std::set<std::string> vs;
  poly_vars(q, vs);
  for (auto& [x, fx] : f) {
    vs.insert(x);
    poly_vars(fx, vs);
  }
  if (B) bexpr_vars(B, vs);
  std::vector<std::string> vars(vs.begin(), vs.end());
  size_t n = vars.size();
  std::vector<unsigned> idx(n, 0);
  for (;;) {
    State s;
    for (size_t i = 0; i < n; ++i)
      s[vars[i]] =
          cfg.points < 2 ? cfg.lo : cfg.lo + (cfg.hi - cfg.lo) * idx[i] / (cfg.points - 1);
    if (!fn(s)) return;
    size_t i = 0;
    while (i < n && ++idx[i] == cfg.points) idx[i++] = 0;
    if (i == n || n == 0) return;
  }
}

}  // namespace detail

// Comparison direction for the invariant conclusion: Eq checks L q = 0,
// Ge checks L q >= 0 (for q >= c invariants), Le the mirror image.
enum class InvSign { Eq, Ge, Le };

inline CheckResult check_diffinv(const Poly& q, const PolyField& f, const BExprPtr& B = nullptr,
                                 InvSign sign = InvSign::Eq, const GridCfg& cfg = {}) {
  Poly lq = lie(q, f, 1);
  if (poly_is_zero(lq)) return {Verdict::ProvedExact, std::nullopt, 0, false};
  if (sign == InvSign::Eq && !B) {
    // a nonzero polynomial is nonzero somewhere: find a refuting point
    CheckResult r{Verdict::Refuted, std::nullopt, 0, false};
    detail::grid_walk(q, f, B, cfg, [&](const State& s) {
      double v = poly_eval(lq, s);
      if (std::abs(v) > cfg.tol) {
        r.witness = s;
        r.value = v;
        return false;
      }
      return true;
    });
    if (!r.witness) r.verdict = Verdict::NoCounterexample;  // grid too coarse to exhibit one
    return r;
  }
  CheckResult r{Verdict::NoCounterexample, std::nullopt, 0, true};
  detail::grid_walk(q, f, B, cfg, [&](const State& s) {
    if (B && !eval_bexpr(B, s)) return true;
    r.vacuous = false;
    double v = poly_eval(lq, s);
    bool bad = sign == InvSign::Eq   ? std::abs(v) > cfg.tol
               : sign == InvSign::Ge ? v < -cfg.tol
                                     : v > cfg.tol;
    if (bad) {
      r.verdict = Verdict::Refuted;
      r.witness = s;
      r.value = v;
      return false;
    }
    return true;
  });
  return r;
}

struct DbxResult {
  bool ok;
  Poly cofactor;  // g with L q = g * q, valid when ok
};

// Darboux equality: L q = g * q exactly. Without a supplied cofactor the
// quotient is recovered by exact division.
inline DbxResult check_dbx(const Poly& q, const PolyField& f,
                           const std::optional<Poly>& g = std::nullopt) {
  Poly lq = lie(q, f, 1);
  if (g) return {poly_eq(lq, pmul(*g, q)), *g};
  if (poly_is_zero(lq)) return {true, poly_zero()};
  auto quot = poly_divide(lq, q);
  if (!quot) return {false, poly_zero()};
  return {true, *quot};
}

// Barrier premise falsification: on grid points with B and |q| <= band the
// Lie derivative must be <= -margin. Sampling never proves the premise.
inline CheckResult check_barrier(const Poly& q, const PolyField& f, const BExprPtr& B,
                                 const GridCfg& cfg = {}) {
  Poly lq = lie(q, f, 1);
  CheckResult r{Verdict::NoCounterexample, std::nullopt, 0, true};
  detail::grid_walk(q, f, B, cfg, [&](const State& s) {
    if (B && !eval_bexpr(B, s)) return true;
    if (std::abs(poly_eval(q, s)) > cfg.band) return true;
    r.vacuous = false;
    double v = poly_eval(lq, s);
    if (v > -cfg.margin) {
      r.verdict = Verdict::Refuted;
      r.witness = s;
      r.value = v;
      return false;
    }
    return true;
  });
  return r;
}

// ---------------------------------------------------------------------------
// Higher-order invariant chain

// Builds the N-clause chain for q > 0 resp. q >= 0 staying invariant:
//   (q >= 0) /\ (q = 0 -> L q >= 0) /\ ...
//     /\ (q = 0 /\ ... /\ L^{N-2} q = 0 -> L^{N-1} q {>,>=} 0)
// and for the weak sign the disjunct where every L^i q vanishes.
inline AssnPtr lstar_formula(const Poly& q, const PolyField& f, unsigned N, bool strict) {
  if (N < 1) throw PolyError("lstar_formula: N must be positive");
  std::vector<VTermPtr> lq;
  Poly cur = q;
  for (unsigned i = 0; i < N; ++i) {
    lq.push_back(vterm_of_expr(expr_of_poly(cur)));
    cur = lie(cur, f, 1);
  }
  AssnPtr chain;
  for (unsigned i = 0; i < N; ++i) {
    bool last = i + 1 == N;
    BExpr::Op op = last && strict ? BExpr::Op::Gt : BExpr::Op::Ge;
    AssnPtr clause = acmp(op, lq[i], vconst(0ll));
    for (unsigned j = i; j-- > 0;)
      clause = aimplies(acmp(BExpr::Op::Eq, lq[j], vconst(0ll)), clause);
    chain = chain ? aand(chain, clause) : clause;
  }
  if (!strict) {
    AssnPtr allzero;
    for (unsigned i = 0; i < N; ++i) {
      AssnPtr z = acmp(BExpr::Op::Eq, lq[i], vconst(0ll));
      allzero = allzero ? aand(allzero, z) : z;
    }
    chain = aor(chain, allzero);
  }
  return chain;
}

// ---------------------------------------------------------------------------
// Trace invariant

struct TrInvCfg {
  unsigned samples = 64;  // per wait event, endpoints included
  double horizon = 10;    // window used for unbounded waits
};

struct TrInvResult {
  bool ok = true;
  size_t event = 0;  // failing wait event index
  double time = 0;   // failing sample time within that event
};

// Checks Inv at sampled points of every wait trajectory, endpoints included.
inline TrInvResult trinv_check(const Trace& t, const BExprPtr& inv, const TrInvCfg& cfg = {}) {
  for (size_t i = 0; i < t.events.size(); ++i) {
    const Event& e = t.events[i];
    if (e.kind != Event::Kind::Wait) continue;
    double d = e.dur == kInf ? cfg.horizon : e.dur;
    for (unsigned k = 0; k <= cfg.samples; ++k) {
      double tm = d * k / cfg.samples;
      if (!eval_bexpr(inv, traj_eval(e.traj, tm))) return {false, i, tm};
    }
  }
  return {true, 0, 0};
}

}  // namespace hcsp
