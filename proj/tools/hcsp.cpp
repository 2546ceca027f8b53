#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hcsp/cases.hpp"
#include "hcsp/euler.hpp"
#include "hcsp/json_io.hpp"
#include "hcsp/parser.hpp"
#include "hcsp/pretty.hpp"
#include "hcsp/simulator.hpp"
#include "hcsp/smallstep.hpp"
#include "hcsp/sync.hpp"
#include "hcsp/wp.hpp"

using namespace hcsp;

namespace {

// exit codes: 0 success, 1 property violation or refutation, 2 usage/parse error
constexpr int kOk = 0, kViolation = 1, kUsage = 2;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void put(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream o(out);
  if (!o) throw std::runtime_error("cannot write " + out);
  o << text;
  if (!text.empty() && text.back() != '\n') o << '\n';
}

Poly parse_poly(const std::string& s) { return poly_of_expr(parse_expr(s)); }

// "x = -y, y = x" style vector field
PolyField parse_field(const std::string& s) {
  PolyField f;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t comma = s.find(',', pos);
    std::string item = s.substr(pos, comma == std::string::npos ? comma : comma - pos);
    size_t eq = item.find('=');
    if (eq == std::string::npos) throw std::runtime_error("field entry needs var=expr: " + item);
    std::string var = item.substr(0, eq);
    var.erase(0, var.find_first_not_of(" \t"));
    var.erase(var.find_last_not_of(" \t") + 1);
    f[var] = parse_poly(item.substr(eq + 1));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return f;
}

OdeField ode_of_field(const PolyField& f) {
  OdeField o;
  for (auto& [x, p] : f) o.emplace_back(x, expr_of_poly(p));
  return o;
}

State parse_state(const std::string& s) {
  State st;
  for (auto& [x, p] : parse_field(s)) {
    if (poly_degree(p) != 0) throw std::runtime_error("state entry must be a number: " + x);
    st[x] = poly_eval(p, {});
  }
  return st;
}

std::set<std::string> split_channels(const std::string& s) {
  std::set<std::string> cs;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t comma = s.find(',', pos);
    std::string ch = s.substr(pos, comma == std::string::npos ? comma : comma - pos);
    if (!ch.empty()) cs.insert(ch);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return cs;
}

int threads_cap() {
  if (const char* v = std::getenv("HCSP_KIT_THREADS")) {
    int n = std::atoi(v);
    if (n > 0) return n;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hybrid CSP toolkit"};
  app.require_subcommand(1);

  uint64_t seed = 0;
  size_t trials = 100, rep_bound = 3;
  double step = 1e-3, tol = 1e-9, horizon = 1e4;
  std::string out, format = "json";
  app.add_option("--seed", seed, "random seed")->capture_default_str();
  app.add_option("--trials", trials, "sampling trials")->capture_default_str();
  app.add_option("--rep-bound", rep_bound, "repetition unrolling bound")->capture_default_str();
  app.add_option("--step", step, "integration step")->capture_default_str();
  app.add_option("--tol", tol, "numeric tolerance")->capture_default_str();
  app.add_option("--horizon", horizon, "time horizon")->capture_default_str();
  app.add_option("--out", out, "output file (default stdout)");
  app.add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

  std::string file, file2, cs_flag, post_s, pre_s, mode = "test", semantics = "big";
  std::string poly_s, field_s, init_s, domain_s, cofactor_s, sign_s = "eq", scenario = "drift";
  unsigned order = 1, rounds = 40;

  auto* c_parse = app.add_subcommand("parse", "parse a process file and pretty-print it");
  c_parse->add_option("file", file)->required();

  auto* c_run = app.add_subcommand("run", "execute a process and emit its trace");
  c_run->add_option("file", file)->required();
  c_run->add_option("--semantics", semantics, "big|small|sim")
      ->check(CLI::IsMember({"big", "small", "sim"}));
  c_run->add_option("--init", init_s, "initial state, e.g. \"x=0, y=1\"");

  auto* c_sync = app.add_subcommand("sync", "synchronize two trace files");
  c_sync->add_option("a", file)->required();
  c_sync->add_option("b", file2)->required();
  c_sync->add_option("--cs", cs_flag, "shared channels, comma separated");

  auto* c_wp = app.add_subcommand("wp", "weakest liberal precondition");
  c_wp->add_option("file", file)->required();
  c_wp->add_option("--post", post_s, "postcondition (boolean expression)")->required();

  auto* c_check = app.add_subcommand("check", "check a Hoare triple");
  c_check->add_option("file", file)->required();
  c_check->add_option("--pre", pre_s)->required();
  c_check->add_option("--post", post_s)->required();
  c_check->add_option("--mode", mode, "exact|test")->check(CLI::IsMember({"exact", "test"}));

  auto* c_lie = app.add_subcommand("lie", "Lie derivative of a polynomial");
  c_lie->add_option("--poly", poly_s)->required();
  c_lie->add_option("--field", field_s, "vector field, e.g. \"x=-y, y=x\"")->required();
  c_lie->add_option("--order", order, "derivative order")->capture_default_str();

  auto* c_diffinv = app.add_subcommand("diffinv", "differential invariant check");
  c_diffinv->add_option("--poly", poly_s)->required();
  c_diffinv->add_option("--field", field_s)->required();
  c_diffinv->add_option("--domain", domain_s, "evolution domain (boolean expression)");
  c_diffinv->add_option("--sign", sign_s, "eq|ge|le")->check(CLI::IsMember({"eq", "ge", "le"}));

  auto* c_dbx = app.add_subcommand("dbx", "Darboux equality check");
  c_dbx->add_option("--poly", poly_s)->required();
  c_dbx->add_option("--field", field_s)->required();
  c_dbx->add_option("--cofactor", cofactor_s, "expected cofactor (optional)");

  auto* c_barrier = app.add_subcommand("barrier", "barrier certificate falsification");
  c_barrier->add_option("--poly", poly_s)->required();
  c_barrier->add_option("--field", field_s)->required();
  c_barrier->add_option("--domain", domain_s)->required();

  auto* c_euler = app.add_subcommand("euler", "Euler discretization of an ODE");
  c_euler->add_option("--field", field_s)->required();
  c_euler->add_option("--init", init_s)->required();

  auto* c_cpdp = app.add_subcommand("cpdp", "continuous vs discrete postcondition table");
  c_cpdp->add_option("--scenario", scenario, "drift|decay")
      ->check(CLI::IsMember({"drift", "decay"}));

  auto* c_case = app.add_subcommand("case", "built-in case studies");
  c_case->add_option("name", file, "lander|scheduler")
      ->required()
      ->check(CLI::IsMember({"lander", "scheduler"}));
  c_case->add_option("--rounds", rounds)->capture_default_str();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kUsage;
  }

  (void)threads_cap();  // trials run single-threaded unless capped higher later

  try {
    if (*c_parse) {
      put(out, pretty(parse_process(slurp(file))));
      return kOk;
    }

    if (*c_run) {
      ProcPtr p = parse_process(slurp(file));
      State init = init_s.empty() ? State{} : parse_state(init_s);
      if (init_s.empty())
        for (auto& x : proc_vars(p)) init[x] = 0;
      ExecCfg cfg;
      cfg.ode_step = step;
      cfg.horizon = horizon;
      Trace tr;
      if (semantics == "sim") {
        SimCfg scfg;
        scfg.ode_step = step;
        scfg.horizon = horizon;
        tr = simulate(p, init, seed, scfg).trace;
      } else if (semantics == "small") {
        RandomOracle o(seed);
        tr = run_star(p, init, o, cfg).trace;
      } else {
        RandomOracle o(seed);
        tr = big_step(p, init, o, cfg).trace;
      }
      put(out, trace_to_json(tr).dump(2));
      return kOk;
    }

    if (*c_sync) {
      Trace a = trace_from_json(Json::parse(slurp(file)));
      Trace b = trace_from_json(Json::parse(slurp(file2)));
      Json arr = Json::array();
      for (auto& t : sync_traces(a, split_channels(cs_flag), b)) arr.push_back(trace_to_json(t));
      put(out, arr.dump(2));
      return kOk;
    }

    if (*c_wp) {
      ProcPtr p = parse_process(slurp(file));
      WpCfg cfg;
      cfg.rep_bound = rep_bound;
      WpResult r = wp(p, assn_of_bexpr(parse_bexpr(post_s)), cfg);
      std::vector<AssnPtr> vcs{r.pre};
      vcs.insert(vcs.end(), r.side_vcs.begin(), r.side_vcs.end());
      put(out, emit_vc(vcs));
      return kOk;
    }

    if (*c_check) {
      ProcPtr p = parse_process(slurp(file));
      AssnPtr P = assn_of_bexpr(parse_bexpr(pre_s));
      AssnPtr Q = assn_of_bexpr(parse_bexpr(post_s));
      TripleReport rep;
      if (mode == "exact") {
        rep = check_triple_exact(P, p, Q, {0, 1, 2}, rep_bound);
      } else {
        EvalCfg ecfg;
        ecfg.sampled_definite = true;
        rep = check_triple_test(P, p, Q, seed, trials, ecfg);
      }
      Json j{{"valid", rep.valid}, {"states", rep.states}, {"runs", rep.runs},
             {"unknown", rep.unknown}};
      if (!rep.valid) j["counterexample"] = rep.counterexample;
      put(out, j.dump(2));
      return rep.valid ? kOk : kViolation;
    }

    if (*c_lie) {
      put(out, poly_str(lie(parse_poly(poly_s), parse_field(field_s), order)));
      return kOk;
    }

    if (*c_diffinv || *c_barrier) {
      Poly q = parse_poly(poly_s);
      PolyField f = parse_field(field_s);
      BExprPtr dom = domain_s.empty() ? nullptr : parse_bexpr(domain_s);
      CheckResult r;
      if (*c_barrier) {
        r = check_barrier(q, f, dom);
      } else {
        InvSign sg = sign_s == "ge" ? InvSign::Ge : sign_s == "le" ? InvSign::Le : InvSign::Eq;
        r = check_diffinv(q, f, dom, sg);
      }
      Json j{{"verdict", verdict_str(r.verdict)}, {"vacuous", r.vacuous}};
      if (r.witness) {
        j["witness"] = state_to_json(*r.witness);
        j["value"] = r.value;
      }
      put(out, j.dump(2));
      return r.verdict == Verdict::Refuted ? kViolation : kOk;
    }

    if (*c_dbx) {
      std::optional<Poly> g;
      if (!cofactor_s.empty()) g = parse_poly(cofactor_s);
      DbxResult r = check_dbx(parse_poly(poly_s), parse_field(field_s), g);
      Json j{{"ok", r.ok}};
      if (r.ok) j["cofactor"] = poly_str(r.cofactor);
      put(out, j.dump(2));
      return r.ok ? kOk : kViolation;
    }

    if (*c_euler) {
      OdeField f = ode_of_field(parse_field(field_s));
      EulerTraj tr = euler_traj(f, parse_state(init_s), step, horizon);
      std::vector<std::string> vars;
      for (auto& [x, v] : tr.verts.front()) vars.push_back(x);
      if (format == "csv") {
        std::ostringstream ss;
        ss << "t";
        for (auto& x : vars) ss << "," << x;
        ss << "\n";
        for (size_t i = 0; i < tr.verts.size(); ++i) {
          ss << i * tr.h;
          for (auto& x : vars) ss << "," << tr.verts[i].at(x);
          ss << "\n";
        }
        put(out, ss.str());
      } else {
        Json arr = Json::array();
        for (size_t i = 0; i < tr.verts.size(); ++i)
          arr.push_back({{"t", i * tr.h}, {"state", state_to_json(tr.verts[i])}});
        put(out, arr.dump(2));
      }
      return kOk;
    }

    if (*c_cpdp) {
      CpDpCfg cfg;
      CpDpReport rep;
      if (scenario == "decay") {
        OdeField f{{"x", eneg(evar("x"))}};
        auto sol = [](double t) { return State{{"x", 2 * std::exp(-t)}}; };
        auto B = bcmp(BExpr::Op::Gt, evar("x"), econst(1));
        auto Q = bcmp(BExpr::Op::Lt, evar("x"), econst(rat(11, 10)));
        rep = cp_dp_experiment(f, sol, B, Q, State{{"x", 2}}, cfg);
      } else {
        OdeField f{{"x", econst(1)}};
        auto sol = [](double t) { return State{{"x", t}}; };
        auto B = bcmp(BExpr::Op::Lt, evar("x"), econst(2));
        auto Q = bcmp(BExpr::Op::Gt, evar("x"), econst(rat(19, 10)));
        rep = cp_dp_experiment(f, sol, B, Q, State{{"x", 0}}, cfg);
      }
      if (format == "csv") {
        std::ostringstream ss;
        ss << "h,eps,cp,dp,max_gap\n";
        for (auto& r : rep.rows)
          ss << r.h << "," << r.eps << "," << r.cp << "," << r.dp << "," << r.max_gap << "\n";
        put(out, ss.str());
      } else {
        Json rows = Json::array();
        for (auto& r : rep.rows)
          rows.push_back({{"h", r.h}, {"eps", r.eps}, {"cp", r.cp}, {"dp", r.dp},
                          {"max_gap", r.max_gap}});
        put(out, Json{{"cp", rep.cp}, {"exit_time", rep.exit_time}, {"rows", rows}}.dump(2));
      }
      return kOk;
    }

    if (*c_case) {
      if (file == "lander") {
        LanderReport rep = lander_check(rounds, step);
        if (format == "csv") {
          std::ostringstream ss;
          ss << "safe,min_v,max_v,samples\n"
             << rep.safe << "," << rep.min_v << "," << rep.max_v << "," << rep.samples << "\n";
          put(out, ss.str());
        } else {
          Json j{{"safe", rep.safe}, {"min_v", rep.min_v}, {"max_v", rep.max_v},
                 {"samples", rep.samples}};
          if (!rep.safe) j["violation_time"] = rep.viol_time;
          put(out, j.dump(2));
        }
        return rep.safe ? kOk : kViolation;
      }
      std::vector<uint64_t> seeds;
      for (uint64_t s = 0; s < trials; ++s) seeds.push_back(seed + s);
      SchedReport rep = scheduler_check(rounds, seeds);
      Json j{{"clean", rep.clean()}, {"double_run", rep.double_run},
             {"priority_violations", rep.prio_viol}, {"budget_violations", rep.budget_viol},
             {"ri_violations", rep.ri_viol}, {"checks", rep.checks},
             {"rounds_seen", rep.rounds_seen}};
      put(out, j.dump(2));
      return rep.clean() ? kOk : kViolation;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
