#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hcsp/expr.hpp"

namespace hcsp {

// Direction of a channel use: '?' receive, '!' send, '.' a synchronized pair.
enum class Dir : char { In = '?', Out = '!', Sync = '.' };

struct ChanDir {
  std::string ch;
  Dir dir;
  auto operator<=>(const ChanDir&) const = default;
};

struct Process;
using ProcPtr = std::shared_ptr<const Process>;

struct CommGuard {
  std::string ch;
  Dir dir;          // In or Out
  std::string var;  // In: bound variable
  ExprPtr expr;     // Out: sent expression
};

struct InterruptBranch {
  CommGuard guard;
  ProcPtr body;
};

struct Process {
  enum class Kind {
    Skip,
    Assign,     // var := expr
    Input,      // ch ? var
    Output,     // ch ! expr
    Seq,        // p1 ; p2
    IChoice,    // p1 ++ p2
    Rep,        // (p)*
    Cond,       // if b then p1 else p2 endif
    Ode,        // < x_dot = e, ... & b >
    Interrupt,  // < ... & b > |> []( guards )
    Parallel,   // p1 ||[cs]|| p2
    Wait        // wait e
  };
  Kind kind;
  std::string var;                           // Assign, Input
  ExprPtr expr;                              // Assign, Output, Wait
  std::string ch;                            // Input, Output
  ProcPtr p1, p2;                            // Seq, IChoice, Cond, Parallel; Rep uses p1
  BExprPtr cond;                             // Cond, Ode, Interrupt (domain)
  std::vector<std::pair<std::string, ExprPtr>> ode;  // Ode, Interrupt
  std::vector<InterruptBranch> branches;     // Interrupt
  std::set<std::string> cs;                  // Parallel channel set
};

inline ProcPtr mk(Process p) { return std::make_shared<Process>(std::move(p)); }

inline ProcPtr pskip() { return mk({.kind = Process::Kind::Skip}); }
inline ProcPtr passign(std::string x, ExprPtr e) {
  return mk({.kind = Process::Kind::Assign, .var = std::move(x), .expr = std::move(e)});
}
inline ProcPtr pinput(std::string ch, std::string x) {
  return mk({.kind = Process::Kind::Input, .var = std::move(x), .ch = std::move(ch)});
}
inline ProcPtr poutput(std::string ch, ExprPtr e) {
  return mk({.kind = Process::Kind::Output, .expr = std::move(e), .ch = std::move(ch)});
}
inline ProcPtr pseq(ProcPtr a, ProcPtr b) {
  return mk({.kind = Process::Kind::Seq, .p1 = std::move(a), .p2 = std::move(b)});
}
inline ProcPtr pseq(std::vector<ProcPtr> ps) {
  ProcPtr out = ps.back();
  for (auto it = ps.rbegin() + 1; it != ps.rend(); ++it) out = pseq(*it, out);
  return out;
}
inline ProcPtr pichoice(ProcPtr a, ProcPtr b) {
  return mk({.kind = Process::Kind::IChoice, .p1 = std::move(a), .p2 = std::move(b)});
}
inline ProcPtr prep(ProcPtr a) { return mk({.kind = Process::Kind::Rep, .p1 = std::move(a)}); }
inline ProcPtr pcond(BExprPtr b, ProcPtr a, ProcPtr c) {
  return mk({.kind = Process::Kind::Cond, .p1 = std::move(a), .p2 = std::move(c), .cond = std::move(b)});
}
inline ProcPtr pode(std::vector<std::pair<std::string, ExprPtr>> ode, BExprPtr dom) {
  return mk({.kind = Process::Kind::Ode, .cond = std::move(dom), .ode = std::move(ode)});
}
inline ProcPtr pinterrupt(std::vector<std::pair<std::string, ExprPtr>> ode, BExprPtr dom,
                          std::vector<InterruptBranch> brs) {
  return mk({.kind = Process::Kind::Interrupt, .cond = std::move(dom), .ode = std::move(ode),
             .branches = std::move(brs)});
}
inline ProcPtr pparallel(ProcPtr a, std::set<std::string> cs, ProcPtr b) {
  return mk({.kind = Process::Kind::Parallel, .p1 = std::move(a), .p2 = std::move(b),
             .cs = std::move(cs)});
}
inline ProcPtr pwait(ExprPtr e) { return mk({.kind = Process::Kind::Wait, .expr = std::move(e)}); }

// Variables a process may write (assignment targets, input binders, ODE vars).
inline void wvar(const ProcPtr& p, std::set<std::string>& out) {
  if (!p) return;
  switch (p->kind) {
    case Process::Kind::Assign:
    case Process::Kind::Input: out.insert(p->var); break;
    case Process::Kind::Ode:
      for (auto& [x, e] : p->ode) out.insert(x);
      break;
    case Process::Kind::Interrupt:
      for (auto& [x, e] : p->ode) out.insert(x);
      for (auto& br : p->branches) {
        if (br.guard.dir == Dir::In) out.insert(br.guard.var);
        wvar(br.body, out);
      }
      break;
    default: break;
  }
  wvar(p->p1, out);
  wvar(p->p2, out);
}

inline std::set<std::string> wvar(const ProcPtr& p) {
  std::set<std::string> out;
  wvar(p, out);
  return out;
}

// All variables read or written.
inline void proc_vars(const ProcPtr& p, std::set<std::string>& out) {
  if (!p) return;
  switch (p->kind) {
    case Process::Kind::Assign:
    case Process::Kind::Input: out.insert(p->var); break;
    case Process::Kind::Ode:
    case Process::Kind::Interrupt:
      for (auto& [x, e] : p->ode) {
        out.insert(x);
        expr_vars(e, out);
      }
      for (auto& br : p->branches) {
        if (br.guard.dir == Dir::In) out.insert(br.guard.var);
        else expr_vars(br.guard.expr, out);
        proc_vars(br.body, out);
      }
      break;
    default: break;
  }
  expr_vars(p->expr, out);
  bexpr_vars(p->cond, out);
  proc_vars(p->p1, out);
  proc_vars(p->p2, out);
}

inline std::set<std::string> proc_vars(const ProcPtr& p) {
  std::set<std::string> out;
  proc_vars(p, out);
  return out;
}

// Channel-direction pairs used anywhere in the process.
inline void chan_dirs(const ProcPtr& p, std::set<ChanDir>& out) {
  if (!p) return;
  switch (p->kind) {
    case Process::Kind::Input: out.insert({p->ch, Dir::In}); break;
    case Process::Kind::Output: out.insert({p->ch, Dir::Out}); break;
    case Process::Kind::Interrupt:
      for (auto& br : p->branches) {
        out.insert({br.guard.ch, br.guard.dir});
        chan_dirs(br.body, out);
      }
      break;
    default: break;
  }
  chan_dirs(p->p1, out);
  chan_dirs(p->p2, out);
}

inline std::set<ChanDir> chan_dirs(const ProcPtr& p) {
  std::set<ChanDir> out;
  chan_dirs(p, out);
  return out;
}

// Parallel components must not share variables and must not use the same
// channel end (same channel, same direction) on both sides.
inline std::vector<std::string> check_wellformed(const ProcPtr& p) {
  std::vector<std::string> errs;
  if (!p) return errs;
  if (p->kind == Process::Kind::Parallel) {
    auto v1 = proc_vars(p->p1), v2 = proc_vars(p->p2);
    for (auto& x : v1)
      if (v2.count(x)) errs.push_back("shared variable across parallel: " + x);
    auto c1 = chan_dirs(p->p1), c2 = chan_dirs(p->p2);
    for (auto& cd : c1)
      if (c2.count(cd))
        errs.push_back("same channel end on both sides: " + cd.ch + static_cast<char>(cd.dir));
  }
  auto sub = [&](const ProcPtr& q) {
    for (auto& e : check_wellformed(q)) errs.push_back(e);
  };
  sub(p->p1);
  sub(p->p2);
  for (auto& br : p->branches) sub(br.body);
  return errs;
}

}  // namespace hcsp
