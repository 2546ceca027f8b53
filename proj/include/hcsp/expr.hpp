#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hcsp/rational.hpp"

namespace hcsp {

// Numeric state: total map from variable names to values. Missing
// variables read as 0 so partially initialized states are usable.
using State = std::map<std::string, double>;

inline double state_get(const State& s, const std::string& x) {
  auto it = s.find(x);
  return it == s.end() ? 0.0 : it->second;
}

// Arithmetic expressions. Constants stay exact rationals until evaluated.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Const, Var, Add, Sub, Mul, Div, Neg };
  Kind kind;
  Rat value;         // Const
  std::string name;  // Var
  ExprPtr lhs, rhs;  // binary ops; Neg uses lhs
};

inline ExprPtr econst(Rat v) {
  return std::make_shared<Expr>(Expr{Expr::Kind::Const, std::move(v), "", nullptr, nullptr});
}
inline ExprPtr econst(long long v) { return econst(rat(v)); }
inline ExprPtr evar(std::string x) {
  return std::make_shared<Expr>(Expr{Expr::Kind::Var, Rat(), std::move(x), nullptr, nullptr});
}
inline ExprPtr ebin(Expr::Kind k, ExprPtr a, ExprPtr b) {
  return std::make_shared<Expr>(Expr{k, Rat(), "", std::move(a), std::move(b)});
}
inline ExprPtr eadd(ExprPtr a, ExprPtr b) { return ebin(Expr::Kind::Add, a, b); }
inline ExprPtr esub(ExprPtr a, ExprPtr b) { return ebin(Expr::Kind::Sub, a, b); }
inline ExprPtr emul(ExprPtr a, ExprPtr b) { return ebin(Expr::Kind::Mul, a, b); }
inline ExprPtr ediv(ExprPtr a, ExprPtr b) { return ebin(Expr::Kind::Div, a, b); }
inline ExprPtr eneg(ExprPtr a) {
  return std::make_shared<Expr>(Expr{Expr::Kind::Neg, Rat(), "", std::move(a), nullptr});
}

inline double eval_expr(const ExprPtr& e, const State& s) {
  switch (e->kind) {
    case Expr::Kind::Const: return to_double(e->value);
    case Expr::Kind::Var: return state_get(s, e->name);
    case Expr::Kind::Add: return eval_expr(e->lhs, s) + eval_expr(e->rhs, s);
    case Expr::Kind::Sub: return eval_expr(e->lhs, s) - eval_expr(e->rhs, s);
    case Expr::Kind::Mul: return eval_expr(e->lhs, s) * eval_expr(e->rhs, s);
    case Expr::Kind::Div: return eval_expr(e->lhs, s) / eval_expr(e->rhs, s);
    case Expr::Kind::Neg: return -eval_expr(e->lhs, s);
  }
  throw std::logic_error("eval_expr: bad kind");
}

inline void expr_vars(const ExprPtr& e, std::set<std::string>& out) {
  if (!e) return;
  if (e->kind == Expr::Kind::Var) out.insert(e->name);
  expr_vars(e->lhs, out);
  expr_vars(e->rhs, out);
}

inline ExprPtr subst_expr(const ExprPtr& e, const std::string& x, const ExprPtr& repl) {
  switch (e->kind) {
    case Expr::Kind::Const: return e;
    case Expr::Kind::Var: return e->name == x ? repl : e;
    case Expr::Kind::Neg: return eneg(subst_expr(e->lhs, x, repl));
    default: return ebin(e->kind, subst_expr(e->lhs, x, repl), subst_expr(e->rhs, x, repl));
  }
}

inline bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Const: return a->value == b->value;
    case Expr::Kind::Var: return a->name == b->name;
    case Expr::Kind::Neg: return expr_equal(a->lhs, b->lhs);
    default: return expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
  }
}

// Boolean expressions over arithmetic comparisons.
struct BExpr;
using BExprPtr = std::shared_ptr<const BExpr>;

struct BExpr {
  enum class Kind { True, False, Cmp, Not, And, Or };
  enum class Op { Lt, Le, Gt, Ge, Eq, Ne };
  Kind kind;
  Op op;               // Cmp
  ExprPtr lhs, rhs;    // Cmp
  BExprPtr b1, b2;     // Not uses b1
};

inline BExprPtr btrue() {
  return std::make_shared<BExpr>(BExpr{BExpr::Kind::True, BExpr::Op::Eq, nullptr, nullptr, nullptr, nullptr});
}
inline BExprPtr bfalse() {
  return std::make_shared<BExpr>(BExpr{BExpr::Kind::False, BExpr::Op::Eq, nullptr, nullptr, nullptr, nullptr});
}
inline BExprPtr bcmp(BExpr::Op op, ExprPtr a, ExprPtr b) {
  return std::make_shared<BExpr>(BExpr{BExpr::Kind::Cmp, op, std::move(a), std::move(b), nullptr, nullptr});
}
inline BExprPtr bnot(BExprPtr b) {
  return std::make_shared<BExpr>(BExpr{BExpr::Kind::Not, BExpr::Op::Eq, nullptr, nullptr, std::move(b), nullptr});
}
inline BExprPtr band(BExprPtr a, BExprPtr b) {
  return std::make_shared<BExpr>(BExpr{BExpr::Kind::And, BExpr::Op::Eq, nullptr, nullptr, std::move(a), std::move(b)});
}
inline BExprPtr bor(BExprPtr a, BExprPtr b) {
  return std::make_shared<BExpr>(BExpr{BExpr::Kind::Or, BExpr::Op::Eq, nullptr, nullptr, std::move(a), std::move(b)});
}

inline bool eval_bexpr(const BExprPtr& b, const State& s) {
  switch (b->kind) {
    case BExpr::Kind::True: return true;
    case BExpr::Kind::False: return false;
    case BExpr::Kind::Not: return !eval_bexpr(b->b1, s);
    case BExpr::Kind::And: return eval_bexpr(b->b1, s) && eval_bexpr(b->b2, s);
    case BExpr::Kind::Or: return eval_bexpr(b->b1, s) || eval_bexpr(b->b2, s);
    case BExpr::Kind::Cmp: {
      double l = eval_expr(b->lhs, s), r = eval_expr(b->rhs, s);
      switch (b->op) {
        case BExpr::Op::Lt: return l < r;
        case BExpr::Op::Le: return l <= r;
        case BExpr::Op::Gt: return l > r;
        case BExpr::Op::Ge: return l >= r;
        case BExpr::Op::Eq: return l == r;
        case BExpr::Op::Ne: return l != r;
      }
    }
  }
  throw std::logic_error("eval_bexpr: bad kind");
}

inline void bexpr_vars(const BExprPtr& b, std::set<std::string>& out) {
  if (!b) return;
  expr_vars(b->lhs, out);
  expr_vars(b->rhs, out);
  bexpr_vars(b->b1, out);
  bexpr_vars(b->b2, out);
}

inline BExprPtr subst_bexpr(const BExprPtr& b, const std::string& x, const ExprPtr& repl) {
  switch (b->kind) {
    case BExpr::Kind::True:
    case BExpr::Kind::False: return b;
    case BExpr::Kind::Cmp: return bcmp(b->op, subst_expr(b->lhs, x, repl), subst_expr(b->rhs, x, repl));
    case BExpr::Kind::Not: return bnot(subst_bexpr(b->b1, x, repl));
    case BExpr::Kind::And: return band(subst_bexpr(b->b1, x, repl), subst_bexpr(b->b2, x, repl));
    case BExpr::Kind::Or: return bor(subst_bexpr(b->b1, x, repl), subst_bexpr(b->b2, x, repl));
  }
  throw std::logic_error("subst_bexpr: bad kind");
}

inline bool bexpr_equal(const BExprPtr& a, const BExprPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case BExpr::Kind::True:
    case BExpr::Kind::False: return true;
    case BExpr::Kind::Cmp:
      return a->op == b->op && expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
    case BExpr::Kind::Not: return bexpr_equal(a->b1, b->b1);
    default: return bexpr_equal(a->b1, b->b1) && bexpr_equal(a->b2, b->b2);
  }
}

}  // namespace hcsp
