#pragma once

#include <sstream>
#include <string>

#include "hcsp/process.hpp"

namespace hcsp {

namespace detail {

// expression precedence: 0 add/sub, 1 mul/div, 2 unary/primary
inline void pp_expr(std::ostringstream& os, const ExprPtr& e, int need) {
  auto paren = [&](int lvl, auto body) {
    if (lvl < need) os << "(";
    body();
    if (lvl < need) os << ")";
  };
  switch (e->kind) {
    case Expr::Kind::Const:
      if (e->value < Rat(0)) {
        paren(2, [&] { os << "-" << rat_to_string(-e->value); });
      } else {
        os << rat_to_string(e->value);
      }
      break;
    case Expr::Kind::Var: os << e->name; break;
    case Expr::Kind::Add:
      paren(0, [&] { pp_expr(os, e->lhs, 0); os << " + "; pp_expr(os, e->rhs, 1); });
      break;
    case Expr::Kind::Sub:
      paren(0, [&] { pp_expr(os, e->lhs, 0); os << " - "; pp_expr(os, e->rhs, 1); });
      break;
    case Expr::Kind::Mul:
      paren(1, [&] { pp_expr(os, e->lhs, 1); os << " * "; pp_expr(os, e->rhs, 2); });
      break;
    case Expr::Kind::Div:
      paren(1, [&] { pp_expr(os, e->lhs, 1); os << " / "; pp_expr(os, e->rhs, 2); });
      break;
    case Expr::Kind::Neg:
      paren(2, [&] { os << "-"; pp_expr(os, e->lhs, 2); });
      break;
  }
}

// bexpr precedence: 0 or, 1 and, 2 not/atom
inline void pp_bexpr(std::ostringstream& os, const BExprPtr& b, int need) {
  auto paren = [&](int lvl, auto body) {
    if (lvl < need) os << "(";
    body();
    if (lvl < need) os << ")";
  };
  switch (b->kind) {
    case BExpr::Kind::True: os << "true"; break;
    case BExpr::Kind::False: os << "false"; break;
    case BExpr::Kind::Cmp: {
      const char* op = nullptr;
      switch (b->op) {
        case BExpr::Op::Lt: op = "<"; break;
        case BExpr::Op::Le: op = "<="; break;
        case BExpr::Op::Gt: op = ">"; break;
        case BExpr::Op::Ge: op = ">="; break;
        case BExpr::Op::Eq: op = "=="; break;
        case BExpr::Op::Ne: op = "!="; break;
      }
      pp_expr(os, b->lhs, 0);
      os << " " << op << " ";
      pp_expr(os, b->rhs, 0);
      break;
    }
    case BExpr::Kind::Not:
      paren(2, [&] { os << "!"; pp_bexpr(os, b->b1, 2); });
      break;
    case BExpr::Kind::And:
      paren(1, [&] { pp_bexpr(os, b->b1, 2); os << " && "; pp_bexpr(os, b->b2, 1); });
      break;
    case BExpr::Kind::Or:
      paren(0, [&] { pp_bexpr(os, b->b1, 1); os << " || "; pp_bexpr(os, b->b2, 0); });
      break;
  }
}

// process precedence: 0 parallel, 1 ichoice, 2 seq, 3 atom
inline void pp_proc(std::ostringstream& os, const ProcPtr& p, int need) {
  auto paren = [&](int lvl, auto body) {
    if (lvl < need) os << "(";
    body();
    if (lvl < need) os << ")";
  };
  switch (p->kind) {
    case Process::Kind::Skip: os << "skip"; break;
    case Process::Kind::Assign:
      os << p->var << " := ";
      pp_expr(os, p->expr, 0);
      break;
    case Process::Kind::Input: os << p->ch << "?" << p->var; break;
    case Process::Kind::Output:
      os << p->ch << "!";
      pp_expr(os, p->expr, 2);
      break;
    case Process::Kind::Wait:
      os << "wait ";
      pp_expr(os, p->expr, 2);
      break;
    case Process::Kind::Seq:
      paren(2, [&] { pp_proc(os, p->p1, 3); os << "; "; pp_proc(os, p->p2, 2); });
      break;
    case Process::Kind::IChoice:
      paren(1, [&] { pp_proc(os, p->p1, 2); os << " ++ "; pp_proc(os, p->p2, 1); });
      break;
    case Process::Kind::Parallel: {
      paren(0, [&] {
        pp_proc(os, p->p1, 1);
        os << " ||[";
        bool first = true;
        for (auto& ch : p->cs) {
          if (!first) os << ",";
          first = false;
          os << ch;
        }
        os << "]|| ";
        pp_proc(os, p->p2, 0);
      });
      break;
    }
    case Process::Kind::Rep:
      os << "(";
      pp_proc(os, p->p1, 0);
      os << ")*";
      break;
    case Process::Kind::Cond:
      os << "if ";
      pp_bexpr(os, p->cond, 0);
      os << " then ";
      pp_proc(os, p->p1, 0);
      os << " else ";
      pp_proc(os, p->p2, 0);
      os << " endif";
      break;
    case Process::Kind::Ode:
    case Process::Kind::Interrupt: {
      os << "<";
      bool first = true;
      for (auto& [x, e] : p->ode) {
        if (!first) os << ", ";
        first = false;
        os << x << "_dot = ";
        pp_expr(os, e, 0);
      }
      os << " & ";
      pp_bexpr(os, p->cond, 0);
      os << ">";
      if (p->kind == Process::Kind::Interrupt) {
        os << " |> [](";
        first = true;
        for (auto& br : p->branches) {
          if (!first) os << ", ";
          first = false;
          os << br.guard.ch;
          if (br.guard.dir == Dir::In) {
            os << "?" << br.guard.var;
          } else {
            os << "!";
            pp_expr(os, br.guard.expr, 2);
          }
          os << " --> ";
          pp_proc(os, br.body, 2);
        }
        os << ")";
      }
      break;
    }
  }
}

}  // namespace detail

inline std::string pretty(const ExprPtr& e) {
  std::ostringstream os;
  detail::pp_expr(os, e, 0);
  return os.str();
}

inline std::string pretty(const BExprPtr& b) {
  std::ostringstream os;
  detail::pp_bexpr(os, b, 0);
  return os.str();
}

inline std::string pretty(const ProcPtr& p) {
  std::ostringstream os;
  detail::pp_proc(os, p, 0);
  return os.str();
}

// structural equality on process trees
inline bool proc_equal(const ProcPtr& a, const ProcPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  if (a->var != b->var || a->ch != b->ch || a->cs != b->cs) return false;
  if ((a->expr != nullptr) != (b->expr != nullptr)) return false;
  if (a->expr && !expr_equal(a->expr, b->expr)) return false;
  if ((a->cond != nullptr) != (b->cond != nullptr)) return false;
  if (a->cond && !bexpr_equal(a->cond, b->cond)) return false;
  if (a->ode.size() != b->ode.size() || a->branches.size() != b->branches.size()) return false;
  for (size_t i = 0; i < a->ode.size(); ++i) {
    if (a->ode[i].first != b->ode[i].first) return false;
    if (!expr_equal(a->ode[i].second, b->ode[i].second)) return false;
  }
  for (size_t i = 0; i < a->branches.size(); ++i) {
    auto &ga = a->branches[i].guard, &gb = b->branches[i].guard;
    if (ga.ch != gb.ch || ga.dir != gb.dir || ga.var != gb.var) return false;
    if ((ga.expr != nullptr) != (gb.expr != nullptr)) return false;
    if (ga.expr && !expr_equal(ga.expr, gb.expr)) return false;
    if (!proc_equal(a->branches[i].body, b->branches[i].body)) return false;
  }
  if ((a->p1 != nullptr) != (b->p1 != nullptr)) return false;
  if (a->p1 && !proc_equal(a->p1, b->p1)) return false;
  if ((a->p2 != nullptr) != (b->p2 != nullptr)) return false;
  if (a->p2 && !proc_equal(a->p2, b->p2)) return false;
  return true;
}

}  // namespace hcsp
