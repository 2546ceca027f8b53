#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hcsp/expr.hpp"

namespace hcsp {

struct PolyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sparse multivariate polynomial with exact rational coefficients.
// Monomials map variable names to positive exponents; coefficients are
// never stored as zero.
using Monomial = std::map<std::string, unsigned>;

struct Poly {
  std::map<Monomial, Rat> terms;
};

inline Poly poly_zero() { return {}; }
inline Poly poly_const(Rat c) {
  Poly p;
  if (c != Rat(0)) p.terms[{}] = std::move(c);
  return p;
}
inline Poly poly_const(long long c) { return poly_const(rat(c)); }
inline Poly poly_var(const std::string& x) {
  Poly p;
  p.terms[{{x, 1}}] = rat(1);
  return p;
}

inline bool poly_is_zero(const Poly& p) { return p.terms.empty(); }
inline bool poly_eq(const Poly& a, const Poly& b) { return a.terms == b.terms; }

inline void poly_add_term(Poly& p, const Monomial& m, const Rat& c) {
  if (c == Rat(0)) return;
  auto it = p.terms.find(m);
  if (it == p.terms.end()) {
    p.terms.emplace(m, c);
  } else {
    it->second += c;
    if (it->second == Rat(0)) p.terms.erase(it);
  }
}

inline Poly padd(const Poly& a, const Poly& b) {
  Poly out = a;
  for (auto& [m, c] : b.terms) poly_add_term(out, m, c);
  return out;
}

inline Poly pneg(const Poly& a) {
  Poly out = a;
  for (auto& [m, c] : out.terms) c = -c;
  return out;
}

inline Poly psub(const Poly& a, const Poly& b) { return padd(a, pneg(b)); }

inline Poly pscale(const Poly& a, const Rat& c) {
  Poly out;
  if (c == Rat(0)) return out;
  for (auto& [m, k] : a.terms) out.terms[m] = k * c;
  return out;
}

inline Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial out = a;
  for (auto& [x, e] : b) out[x] += e;
  return out;
}

inline Poly pmul(const Poly& a, const Poly& b) {
  Poly out;
  for (auto& [ma, ca] : a.terms)
    for (auto& [mb, cb] : b.terms) poly_add_term(out, mono_mul(ma, mb), ca * cb);
  return out;
}

inline Poly ppow(const Poly& a, unsigned k) {
  Poly out = poly_const(1);
  for (unsigned i = 0; i < k; ++i) out = pmul(out, a);
  return out;
}

inline Poly pderiv(const Poly& p, const std::string& x) {
  Poly out;
  for (auto& [m, c] : p.terms) {
    auto it = m.find(x);
    if (it == m.end()) continue;
    Monomial d = m;
    unsigned e = it->second;
    if (e == 1)
      d.erase(x);
    else
      d[x] = e - 1;
    poly_add_term(out, d, c * rat(static_cast<long long>(e)));
  }
  return out;
}

inline unsigned poly_degree(const Poly& p) {
  unsigned deg = 0;
  for (auto& [m, c] : p.terms) {
    unsigned d = 0;
    for (auto& [x, e] : m) d += e;
    deg = std::max(deg, d);
  }
  return deg;
}

inline void poly_vars(const Poly& p, std::set<std::string>& out) {
  for (auto& [m, c] : p.terms)
    for (auto& [x, e] : m) out.insert(x);
}

inline double poly_eval(const Poly& p, const State& s) {
  double acc = 0;
  for (auto& [m, c] : p.terms) {
    double t = to_double(c);
    for (auto& [x, e] : m)
      for (unsigned i = 0; i < e; ++i) t *= state_get(s, x);
    acc += t;
  }
  return acc;
}

// Converts an expression tree. Division is only accepted by a nonzero
// constant; anything else is not a polynomial.
inline Poly poly_of_expr(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Const: return poly_const(e->value);
    case Expr::Kind::Var: return poly_var(e->name);
    case Expr::Kind::Add: return padd(poly_of_expr(e->lhs), poly_of_expr(e->rhs));
    case Expr::Kind::Sub: return psub(poly_of_expr(e->lhs), poly_of_expr(e->rhs));
    case Expr::Kind::Mul: return pmul(poly_of_expr(e->lhs), poly_of_expr(e->rhs));
    case Expr::Kind::Neg: return pneg(poly_of_expr(e->lhs));
    case Expr::Kind::Div: {
      Poly d = poly_of_expr(e->rhs);
      if (d.terms.size() != 1 || !d.terms.count(Monomial{}))
        throw PolyError("division by a non-constant");
      return pscale(poly_of_expr(e->lhs), Rat(1) / d.terms.begin()->second);
    }
  }
  throw PolyError("bad expr kind");
}

inline ExprPtr expr_of_poly(const Poly& p) {
  if (p.terms.empty()) return econst(0);
  ExprPtr acc;
  for (auto& [m, c] : p.terms) {
    ExprPtr t = econst(c);
    for (auto& [x, e] : m)
      for (unsigned i = 0; i < e; ++i) t = emul(t, evar(x));
    acc = acc ? eadd(acc, t) : t;
  }
  return acc;
}

inline std::string poly_str(const Poly& p) {
  if (p.terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [m, c] : p.terms) {
    Rat coef = c;
    if (first) {
      if (coef < Rat(0)) {
        os << "-";
        coef = -coef;
      }
    } else {
      os << (coef < Rat(0) ? " - " : " + ");
      if (coef < Rat(0)) coef = -coef;
    }
    first = false;
    bool unit = coef == Rat(1) && !m.empty();
    if (!unit) {
      os << coef.numerator();
      if (coef.denominator() != BigInt(1)) os << "/" << coef.denominator();
    }
    bool lead = unit;
    for (auto& [x, e] : m) {
      if (!lead) os << "*";
      lead = false;
      os << x;
      if (e > 1) os << "^" << e;
    }
  }
  return os.str();
}

namespace detail {

// Lexicographic order over a fixed variable list; unlike raw map-key
// comparison this is a genuine monomial order (stable under multiplication).
inline bool mono_lex_less(const Monomial& a, const Monomial& b,
                          const std::vector<std::string>& vars) {
  for (auto& x : vars) {
    auto ia = a.find(x), ib = b.find(x);
    unsigned ea = ia == a.end() ? 0 : ia->second;
    unsigned eb = ib == b.end() ? 0 : ib->second;
    if (ea != eb) return ea < eb;
  }
  return false;
}

inline std::map<Monomial, Rat>::const_iterator poly_lead(
    const Poly& p, const std::vector<std::string>& vars) {
  auto best = p.terms.begin();
  for (auto it = p.terms.begin(); it != p.terms.end(); ++it)
    if (mono_lex_less(best->first, it->first, vars)) best = it;
  return best;
}

}  // namespace detail

// Exact multivariate division: returns q with n = q*d when lex-ordered long
// division leaves no remainder, nullopt otherwise.
inline std::optional<Poly> poly_divide(const Poly& n, const Poly& d) {
  if (poly_is_zero(d)) return std::nullopt;
  std::set<std::string> vs;
  poly_vars(n, vs);
  poly_vars(d, vs);
  std::vector<std::string> vars(vs.begin(), vs.end());
  auto lead = detail::poly_lead(d, vars);
  Poly q, r = n;
  while (!poly_is_zero(r)) {
    auto rl = detail::poly_lead(r, vars);
    Monomial qm = rl->first;
    for (auto& [x, e] : lead->first) {
      auto it = qm.find(x);
      if (it == qm.end() || it->second < e) return std::nullopt;
      if (it->second > e)
        it->second -= e;
      else
        qm.erase(it);
    }
    Poly t;
    t.terms[qm] = rl->second / lead->second;
    q = padd(q, t);
    r = psub(r, pmul(t, d));
  }
  return q;
}

}  // namespace hcsp
