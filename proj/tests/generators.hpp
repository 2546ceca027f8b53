#pragma once

#include <random>
#include <vector>

#include "hcsp/lie.hpp"
#include "hcsp/process.hpp"
#include "hcsp/trajectory.hpp"

namespace gen {

using namespace hcsp;

inline std::vector<std::string> kVars{"x", "y", "z"};
inline std::vector<std::string> kChans{"a", "b", "c"};

inline ExprPtr expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 4);
  switch (pick(rng)) {
    case 0: return econst(rat(std::uniform_int_distribution<int>(-4, 4)(rng)));
    case 1: return evar(kVars[std::uniform_int_distribution<size_t>(0, kVars.size() - 1)(rng)]);
    case 2: return eadd(expr(rng, depth - 1), expr(rng, depth - 1));
    case 3: return esub(expr(rng, depth - 1), expr(rng, depth - 1));
    default: return emul(expr(rng, depth - 1), expr(rng, depth - 1));
  }
}

inline BExprPtr bexpr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 5);
  static const BExpr::Op ops[] = {BExpr::Op::Lt, BExpr::Op::Le, BExpr::Op::Gt,
                                  BExpr::Op::Ge, BExpr::Op::Eq, BExpr::Op::Ne};
  switch (pick(rng)) {
    case 0: return std::bernoulli_distribution(0.5)(rng) ? btrue() : bfalse();
    case 1:
    case 2:
      return bcmp(ops[std::uniform_int_distribution<int>(0, 5)(rng)], expr(rng, depth - 1),
                  expr(rng, depth - 1));
    case 3: return bnot(bexpr(rng, depth - 1));
    case 4: return band(bexpr(rng, depth - 1), bexpr(rng, depth - 1));
    default: return bor(bexpr(rng, depth - 1), bexpr(rng, depth - 1));
  }
}

inline std::string var(std::mt19937_64& rng) {
  return kVars[std::uniform_int_distribution<size_t>(0, kVars.size() - 1)(rng)];
}
inline std::string chan(std::mt19937_64& rng) {
  return kChans[std::uniform_int_distribution<size_t>(0, kChans.size() - 1)(rng)];
}

// discrete fragment: no waits, ODEs or parallel
inline ProcPtr proc_discrete(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 3 : 9);
  switch (pick(rng)) {
    case 0: return pskip();
    case 1:
    case 2: return passign(var(rng), expr(rng, 2));
    case 3: return std::bernoulli_distribution(0.5)(rng) ? pinput(chan(rng), var(rng))
                                                         : poutput(chan(rng), expr(rng, 2));
    case 4:
    case 5: return pseq(proc_discrete(rng, depth - 1), proc_discrete(rng, depth - 1));
    case 6: return pichoice(proc_discrete(rng, depth - 1), proc_discrete(rng, depth - 1));
    case 7: return pcond(bexpr(rng, 1), proc_discrete(rng, depth - 1), proc_discrete(rng, depth - 1));
    default: return prep(proc_discrete(rng, depth - 1));
  }
}

// affine ODE whose domain is a clock bound, so every run leaves the domain
inline ProcPtr ode_affine(std::mt19937_64& rng) {
  OdeField field;
  field.emplace_back("t", econst(1));
  if (std::bernoulli_distribution(0.6)(rng)) {
    std::string x = std::bernoulli_distribution(0.5)(rng) ? "x" : "y";
    ExprPtr rhs = eadd(emul(econst(rat(std::uniform_int_distribution<int>(-2, 2)(rng))), evar(x)),
                       econst(rat(std::uniform_int_distribution<int>(-2, 2)(rng))));
    field.emplace_back(x, rhs);
  }
  BExprPtr dom = bcmp(BExpr::Op::Lt, evar("t"),
                      econst(rat(std::uniform_int_distribution<int>(1, 3)(rng))));
  return pode(std::move(field), dom);
}

inline ProcPtr interrupt_affine(std::mt19937_64& rng, int depth) {
  OdeField field;
  field.emplace_back("t", econst(1));
  BExprPtr dom = bcmp(BExpr::Op::Lt, evar("t"),
                      econst(rat(std::uniform_int_distribution<int>(1, 3)(rng))));
  std::vector<InterruptBranch> brs;
  size_t n = std::uniform_int_distribution<size_t>(1, 2)(rng);
  for (size_t i = 0; i < n; ++i) {
    CommGuard g;
    g.ch = kChans[i];
    if (std::bernoulli_distribution(0.5)(rng)) {
      g.dir = Dir::In;
      g.var = var(rng);
    } else {
      g.dir = Dir::Out;
      g.expr = expr(rng, 1);
    }
    brs.push_back({std::move(g), proc_discrete(rng, depth - 1)});
  }
  return pinterrupt(std::move(field), dom, std::move(brs));
}

// discrete plus affine-ODE constructs, sequential
inline ProcPtr proc_hybrid(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 3 : 12);
  switch (pick(rng)) {
    case 0: return pskip();
    case 1:
    case 2: return passign(var(rng), expr(rng, 2));
    case 3: return std::bernoulli_distribution(0.5)(rng) ? pinput(chan(rng), var(rng))
                                                         : poutput(chan(rng), expr(rng, 2));
    case 4:
    case 5: return pseq(proc_hybrid(rng, depth - 1), proc_hybrid(rng, depth - 1));
    case 6: return pichoice(proc_hybrid(rng, depth - 1), proc_hybrid(rng, depth - 1));
    case 7: return pcond(bexpr(rng, 1), proc_hybrid(rng, depth - 1), proc_hybrid(rng, depth - 1));
    case 8: return prep(proc_hybrid(rng, depth - 1));
    case 9: return pwait(econst(rat(std::uniform_int_distribution<int>(0, 2)(rng))));
    case 10: return ode_affine(rng);
    default: return interrupt_affine(rng, depth);
  }
}

// full syntax, for parser round trips
inline ProcPtr proc_full(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 3 : 13);
  switch (pick(rng)) {
    case 12: {
      std::set<std::string> cs{chan(rng)};
      if (std::bernoulli_distribution(0.4)(rng)) cs.insert(chan(rng));
      return pparallel(proc_full(rng, depth - 1), std::move(cs), proc_full(rng, depth - 1));
    }
    case 13: return pwait(expr(rng, 1));
    default: break;
  }
  std::uniform_int_distribution<int> pick2(0, depth <= 0 ? 3 : 11);
  switch (pick2(rng)) {
    case 0: return pskip();
    case 1:
    case 2: return passign(var(rng), expr(rng, 2));
    case 3: return std::bernoulli_distribution(0.5)(rng) ? pinput(chan(rng), var(rng))
                                                         : poutput(chan(rng), expr(rng, 2));
    case 4:
    case 5: return pseq(proc_full(rng, depth - 1), proc_full(rng, depth - 1));
    case 6: return pichoice(proc_full(rng, depth - 1), proc_full(rng, depth - 1));
    case 7: return pcond(bexpr(rng, 1), proc_full(rng, depth - 1), proc_full(rng, depth - 1));
    case 8: return prep(proc_full(rng, depth - 1));
    case 9: return ode_affine(rng);
    case 10: return interrupt_affine(rng, depth);
    default: return pwait(expr(rng, 1));
  }
}

// Upper bound on the number of runs the discrete enumeration can produce;
// used to skip pathological generator outputs before exhaustive checks.
inline double enum_bound(const ProcPtr& p, size_t domain_size, size_t rep_bound) {
  switch (p->kind) {
    case Process::Kind::Skip:
    case Process::Kind::Assign:
    case Process::Kind::Output: return 1;
    case Process::Kind::Input: return double(domain_size);
    case Process::Kind::Seq:
      return enum_bound(p->p1, domain_size, rep_bound) * enum_bound(p->p2, domain_size, rep_bound);
    case Process::Kind::Cond:
    case Process::Kind::IChoice:
      return enum_bound(p->p1, domain_size, rep_bound) + enum_bound(p->p2, domain_size, rep_bound);
    case Process::Kind::Rep: {
      double total = 1, pow = 1;
      for (size_t k = 1; k <= rep_bound; ++k) {
        pow *= enum_bound(p->p1, domain_size, k);
        total += pow;
      }
      return total;
    }
    default: return 1e18;  // continuous or parallel: not enumerable
  }
}

// random polynomial over the first nvars of {x, y, z}, total degree <= deg,
// small integer coefficients
inline Poly poly(std::mt19937_64& rng, unsigned deg, unsigned nvars) {
  static const char* names[] = {"x", "y", "z"};
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<unsigned> nterms(1, 6);
  Poly p;
  unsigned n = nterms(rng);
  for (unsigned t = 0; t < n; ++t) {
    Monomial m;
    unsigned budget = std::uniform_int_distribution<unsigned>(0, deg)(rng);
    for (unsigned i = 0; i < budget; ++i) {
      unsigned v = std::uniform_int_distribution<unsigned>(0, nvars - 1)(rng);
      ++m[names[v]];
    }
    poly_add_term(p, m, rat(coef(rng)));
  }
  return p;
}

inline PolyField poly_fieldgen(std::mt19937_64& rng, unsigned deg, unsigned nvars) {
  static const char* names[] = {"x", "y", "z"};
  PolyField f;
  for (unsigned i = 0; i < nvars; ++i) f[names[i]] = poly(rng, deg, nvars);
  return f;
}

inline State state(std::mt19937_64& rng) {
  State s;
  for (auto& v : kVars)
    s[v] = std::uniform_int_distribution<int>(-2, 2)(rng);
  s["t"] = 0;
  return s;
}

}  // namespace gen
