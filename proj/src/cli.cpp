#include "expderiv/cli.hpp"

#include <climits>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "expderiv/dle.hpp"
#include "expderiv/errors.hpp"
#include "expderiv/solve.hpp"
#include "expderiv/term.hpp"
#include "expderiv/torsor.hpp"

namespace expderiv {

namespace {

using nlohmann::json;

// Ordered key=value report that mirrors itself into a nested json object
// (dots in keys open sub-objects). Both serializations carry the same
// values by construction.
struct Report {
  std::vector<std::pair<std::string, std::string>> lines;
  json j = json::object();

  json* slot(const std::string& key) {
    json* cur = &j;
    std::size_t start = 0;
    while (true) {
      auto dot = key.find('.', start);
      if (dot == std::string::npos) return &(*cur)[key.substr(start)];
      cur = &(*cur)[key.substr(start, dot - start)];
      start = dot + 1;
    }
  }
  void put(const std::string& key, const std::string& v) {
    lines.emplace_back(key, v);
    *slot(key) = v;
  }
  void put(const std::string& key, const char* v) { put(key, std::string(v)); }
  void put(const std::string& key, double v) {
    lines.emplace_back(key, RealBackend{}.to_string(v));
    *slot(key) = v;
  }
  void put(const std::string& key, bool v) {
    lines.emplace_back(key, v ? "true" : "false");
    *slot(key) = v;
  }
  void put(const std::string& key, long long v) {
    lines.emplace_back(key, std::to_string(v));
    *slot(key) = v;
  }
  void print(std::ostream& os, bool as_json) const {
    if (as_json) {
      os << j.dump(2) << "\n";
    } else {
      for (const auto& [k, v] : lines) os << k << "=" << v << "\n";
    }
  }
};

struct Opts {
  std::string backend = "real";
  long long p = 2;
  long long precision = 12;
  double eps_res = 0, eps_reg = 0, radius = 0;  // 0 = keep default
  long long res_min_val = LLONG_MIN, reg_max_val = LLONG_MIN, nbhd_min_val = LLONG_MIN;
  long long seed = -1;  // -1 = take EXPDERIV_SEED, else 0
  long long level = 1;
  bool json_out = false;
  std::string in_path, out_path, target_path;
  std::string expr, var;
  std::vector<std::string> system, point, tangent, unknowns, params, dependents, vars_list;
};

bool is_prime(long long p) {
  if (p < 2) return false;
  for (long long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

// "x" and "x_d2" via the reserved suffix, "x:2" via the jet notation.
VarId parse_cli_varid(const std::string& raw) {
  std::string s = trim(raw);
  auto colon = s.find(':');
  if (colon == std::string::npos) return decode_varid(s);
  VarId v{s.substr(0, colon), 0};
  try {
    v.order = static_cast<std::uint32_t>(std::stoul(s.substr(colon + 1)));
  } catch (const std::exception&) {
    throw DomainError("bad derivative order in '" + s + "'");
  }
  if (v.base.empty()) throw DomainError("empty variable name in '" + s + "'");
  return v;
}

std::string fmt_var(const VarId& v) { return v.base + ":" + std::to_string(v.order); }

Rational parse_rational(const std::string& s) {
  if (s.empty()) throw DomainError("empty rational literal");
  for (char c : s)
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '/'))
      throw DomainError("expected an exact rational (like -7/3), got '" + s + "'");
  try {
    return Rational(s);
  } catch (const std::exception&) {
    throw DomainError("bad rational literal '" + s + "'");
  }
}

double parse_real_value(const std::string& s) {
  if (s.find('/') != std::string::npos) return rat_to_double(parse_rational(s));
  try {
    std::size_t idx = 0;
    double x = std::stod(s, &idx);
    if (idx != s.size()) throw DomainError("trailing characters in number '" + s + "'");
    return x;
  } catch (const DomainError&) {
    throw;
  } catch (const std::exception&) {
    throw DomainError("bad number '" + s + "'");
  }
}

std::vector<std::pair<VarId, std::string>> parse_assignments(const std::vector<std::string>& raw) {
  std::vector<std::pair<VarId, std::string>> out;
  for (const auto& chunk : raw)
    for (const auto& tok : split(chunk, ',')) {
      auto eq = tok.find('=');
      if (eq == std::string::npos)
        throw DomainError("expected var=value, got '" + tok + "'");
      out.emplace_back(parse_cli_varid(tok.substr(0, eq)), trim(tok.substr(eq + 1)));
    }
  return out;
}

template <class B>
Point<typename B::Scalar> scalar_point(const B& backend, const std::vector<std::string>& raw) {
  Point<typename B::Scalar> pt;
  for (const auto& [v, val] : parse_assignments(raw)) {
    if constexpr (std::is_same_v<B, RealBackend>)
      pt[v] = parse_real_value(val);
    else
      pt[v] = backend.from_rational(parse_rational(val));
  }
  return pt;
}

RationalPoint rational_point(const std::vector<std::string>& raw) {
  RationalPoint pt;
  for (const auto& [v, val] : parse_assignments(raw)) pt[v] = parse_rational(val);
  return pt;
}

std::vector<EPoly> parse_system(const std::vector<std::string>& raw) {
  std::vector<EPoly> polys;
  for (const auto& chunk : raw)
    for (const auto& part : split(chunk, ';')) polys.push_back(parse_epoly(trim(part)));
  if (polys.empty()) throw DomainError("empty system");
  return polys;
}

std::vector<VarId> parse_vars(const std::vector<std::string>& raw) {
  std::vector<VarId> out;
  for (const auto& chunk : raw)
    for (const auto& tok : split(chunk, ',')) out.push_back(parse_cli_varid(tok));
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw PreconditionError("cannot open file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

KhovanskiiSystem build_system(const std::vector<EPoly>& polys, std::vector<VarId> unknowns,
                              std::vector<VarId> params) {
  if (unknowns.empty()) {
    std::set<VarId> seen;
    for (const auto& p : polys) p.collect_vars(seen);
    unknowns.assign(seen.begin(), seen.end());
  }
  if (params.empty()) {
    std::set<VarId> seen;
    for (const auto& p : polys) p.collect_vars(seen);
    std::set<VarId> u(unknowns.begin(), unknowns.end());
    for (const auto& v : seen)
      if (!u.count(v)) params.push_back(v);
  }
  VarPartition part;
  part.unknowns = std::move(unknowns);
  part.parameters = std::move(params);
  return khovanskii_build(polys, std::move(part));
}

ToleranceSpec apply_tol(ToleranceSpec t, const Opts& o) {
  if (o.eps_res > 0) t.eps_res = o.eps_res;
  if (o.eps_reg > 0) t.eps_reg = o.eps_reg;
  if (o.radius > 0) t.radius = o.radius;
  if (o.res_min_val != LLONG_MIN) t.res_min_val = o.res_min_val;
  if (o.reg_max_val != LLONG_MIN) t.reg_max_val = o.reg_max_val;
  if (o.nbhd_min_val != LLONG_MIN) t.nbhd_min_val = o.nbhd_min_val;
  return t;
}

std::uint64_t resolve_seed(const Opts& o) {
  if (o.seed >= 0) return static_cast<std::uint64_t>(o.seed);
  if (const char* env = std::getenv("EXPDERIV_SEED"))
    return std::strtoull(env, nullptr, 10);
  return 0;
}

void check_backend(const Opts& o) {
  if (o.backend == "padic") {
    if (!is_prime(o.p)) throw DomainError("--p must be a prime >= 2");
    if (o.precision < 1) throw DomainError("--precision must be >= 1");
  }
}

// Runs fn with the selected backend. fn returns the exit code.
template <class F>
int with_backend(const Opts& o, F&& fn) {
  check_backend(o);
  if (o.backend == "padic") {
    PadicBackend b{o.p, static_cast<int>(o.precision)};
    return fn(b);
  }
  RealBackend b;
  return fn(b);
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  Opts o;
  CLI::App app{"exact algebra of exponential polynomials with derivations"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub, bool with_numeric) {
    sub->add_flag("--json", o.json_out, "structured json report");
    sub->add_option("--out", o.out_path, "write the report (or built file) here");
    if (with_numeric) {
      sub->add_option("--backend", o.backend, "numeric backend")
          ->check(CLI::IsMember({"real", "padic"}));
      sub->add_option("--p", o.p, "p-adic prime");
      sub->add_option("--precision", o.precision, "p-adic relative precision");
      sub->add_option("--eps-res", o.eps_res, "real residual tolerance")
          ->check(CLI::PositiveNumber);
      sub->add_option("--eps-reg", o.eps_reg, "real regularity floor")
          ->check(CLI::PositiveNumber);
      sub->add_option("--radius", o.radius, "real neighborhood radius")
          ->check(CLI::PositiveNumber);
      sub->add_option("--res-min-val", o.res_min_val, "p-adic residual valuation floor");
      sub->add_option("--reg-max-val", o.reg_max_val, "p-adic regularity valuation cap");
      sub->add_option("--nbhd-min-val", o.nbhd_min_val, "p-adic neighborhood depth");
    }
  };

  CLI::App* normalize = app.add_subcommand("normalize", "parse, push D inward, fold");
  normalize->add_option("expr", o.expr, "term")->required();
  add_common(normalize, false);

  CLI::App* ord_cmd = app.add_subcommand("ord", "ordinal complexity of an expression");
  ord_cmd->add_option("expr", o.expr, "exponential polynomial")->required();
  add_common(ord_cmd, false);

  CLI::App* diff = app.add_subcommand("diff", "partial derivative");
  diff->add_option("expr", o.expr)->required();
  diff->add_option("--var", o.var, "variable to differentiate by")->required();
  add_common(diff, false);

  CLI::App* dshift = app.add_subcommand("delta-shift", "apply the derivation");
  dshift->add_option("expr", o.expr)->required();
  add_common(dshift, false);

  CLI::App* jac = app.add_subcommand("jacobian", "symbolic jacobian of a system");
  jac->add_option("--system", o.system)->required();
  jac->add_option("--vars", o.vars_list)->required();
  add_common(jac, false);

  CLI::App* star = app.add_subcommand("star", "derivative coordinates of a formula");
  star->add_option("formula", o.expr)->required();
  add_common(star, false);

  CLI::App* khov_build = app.add_subcommand("khov-build", "assemble a khovanskii system");
  khov_build->add_option("--system", o.system)->required();
  khov_build->add_option("--unknowns", o.unknowns);
  khov_build->add_option("--params", o.params);
  add_common(khov_build, false);

  CLI::App* khov_check = app.add_subcommand("khov-check", "verify a solution point");
  khov_check->add_option("--system", o.system)->required();
  khov_check->add_option("--unknowns", o.unknowns);
  khov_check->add_option("--params", o.params);
  khov_check->add_option("--point", o.point)->required();
  add_common(khov_check, true);

  CLI::App* propagate = app.add_subcommand("propagate", "numeric jet propagation");
  propagate->add_option("--system", o.system)->required();
  propagate->add_option("--unknowns", o.unknowns);
  propagate->add_option("--params", o.params);
  propagate->add_option("--point", o.point)->required();
  propagate->add_option("--level", o.level)->check(CLI::PositiveNumber);
  add_common(propagate, true);

  CLI::App* torsor = app.add_subcommand("torsor", "first-order residuals of a tangent");
  torsor->add_option("--system", o.system)->required();
  torsor->add_option("--point", o.point)->required();
  torsor->add_option("--tangent", o.tangent)->required();
  add_common(torsor, true);

  CLI::App* solve_jet = app.add_subcommand("solve-jet", "complete a tangent on dependents");
  solve_jet->add_option("--system", o.system)->required();
  solve_jet->add_option("--dependents", o.dependents)->required();
  solve_jet->add_option("--point", o.point)->required();
  solve_jet->add_option("--tangent", o.tangent);
  add_common(solve_jet, true);

  CLI::App* newton = app.add_subcommand("newton", "seeded newton solve");
  newton->add_option("--system", o.system)->required();
  newton->add_option("--unknowns", o.unknowns);
  newton->add_option("--point", o.point)->required();
  add_common(newton, true);

  CLI::App* hensel = app.add_subcommand("hensel", "p-adic lift from a rational seed");
  hensel->add_option("--system", o.system)->required();
  hensel->add_option("--unknowns", o.unknowns);
  hensel->add_option("--point", o.point, "exact rational seed")->required();
  add_common(hensel, true);

  CLI::App* eval = app.add_subcommand("eval", "evaluate an expression at a point");
  eval->add_option("expr", o.expr)->required();
  eval->add_option("--point", o.point);
  add_common(eval, true);

  CLI::App* dle_build = app.add_subcommand("dle-build", "build a cleared instance file");
  dle_build->add_option("--in", o.in_path)->required();
  add_common(dle_build, false);

  CLI::App* dle_render = app.add_subcommand("dle-render", "render an instance");
  dle_render->add_option("--in", o.in_path)->required();
  add_common(dle_render, false);

  CLI::App* dle_solve = app.add_subcommand("dle-solve", "search for a jet near a target");
  dle_solve->add_option("--in", o.in_path)->required();
  dle_solve->add_option("--target", o.target_path, "target jet file")->required();
  dle_solve->add_option("--seed", o.seed, "perturbation seed");
  add_common(dle_solve, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  Report rep;
  std::ofstream out_file;
  std::ostream* os = &std::cout;

  try {
    int code = 0;

    if (app.got_subcommand(normalize)) {
      TermPtr t = delta_normalize(parse_term(o.expr));
      FoldedTerm f = fold_term(t);
      rep.put("normalized", print_term(t));
      rep.put("num", print_epoly(f.num));
      if (!(f.den == EPoly::one())) rep.put("den", print_epoly(f.den));
    } else if (app.got_subcommand(ord_cmd)) {
      rep.put("ord", to_string(ord(parse_epoly(o.expr))));
    } else if (app.got_subcommand(diff)) {
      rep.put("diff", print_epoly(partial_derivative(parse_epoly(o.expr), parse_cli_varid(o.var))));
    } else if (app.got_subcommand(dshift)) {
      rep.put("shift", print_epoly(delta_shift(parse_epoly(o.expr))));
    } else if (app.got_subcommand(jac)) {
      std::vector<EPoly> polys = parse_system(o.system);
      std::vector<VarId> vars = parse_vars(o.vars_list);
      auto J = jacobian(polys, vars);
      for (std::size_t i = 0; i < J.size(); ++i)
        for (std::size_t k = 0; k < J[i].size(); ++k)
          rep.put("J." + std::to_string(i) + "." + std::to_string(k), print_epoly(J[i][k]));
      if (polys.size() == vars.size())
        rep.put("det", print_epoly(jacobian_det(polys, vars)));
    } else if (app.got_subcommand(star)) {
      StarSystem sys = star_transform(parse_formula(o.expr));
      rep.put("order", static_cast<long long>(sys.order));
      for (std::size_t i = 0; i < sys.equations.size(); ++i)
        rep.put("eq." + std::to_string(i), print_epoly(sys.equations[i]));
      for (std::size_t i = 0; i < sys.inequations.size(); ++i)
        rep.put("ineq." + std::to_string(i), print_epoly(sys.inequations[i]));
    } else if (app.got_subcommand(khov_build)) {
      KhovanskiiSystem sys =
          build_system(parse_system(o.system), parse_vars(o.unknowns), parse_vars(o.params));
      for (std::size_t i = 0; i < sys.polys.size(); ++i)
        rep.put("poly." + std::to_string(i), print_epoly(sys.polys[i]));
      std::string us, ps;
      for (const auto& u : sys.unknowns) us += (us.empty() ? "" : ",") + fmt_var(u);
      for (const auto& p : sys.parameters) ps += (ps.empty() ? "" : ",") + fmt_var(p);
      rep.put("unknowns", us);
      rep.put("params", ps);
      rep.put("det", print_epoly(sys.jac_det));
    } else if (app.got_subcommand(khov_check)) {
      KhovanskiiSystem sys =
          build_system(parse_system(o.system), parse_vars(o.unknowns), parse_vars(o.params));
      code = with_backend(o, [&](const auto& b) {
        // Verification of a user-supplied approximate point: default to a
        // check-grade residual tolerance rather than the solver-grade one.
        ToleranceSpec tol = apply_tol({}, o);
        if (o.eps_res == 0) tol.eps_res = 1e-6;
        auto pt = scalar_point(b, o.point);
        auto chk = khovanskii_check(b, sys, pt, tol);
        for (std::size_t i = 0; i < chk.residuals.size(); ++i)
          rep.put("residual." + std::to_string(i), b.to_string(chk.residuals[i]));
        rep.put("residuals_ok", chk.residuals_ok);
        rep.put("det", b.to_string(chk.jac_det));
        rep.put("regular", chk.regular);
        rep.put("dim_bound", static_cast<long long>(chk.dim_bound));
        rep.put("verdict", chk.verdict());
        return chk.verdict() ? 0 : 1;
      });
    } else if (app.got_subcommand(propagate)) {
      KhovanskiiSystem sys =
          build_system(parse_system(o.system), parse_vars(o.unknowns), parse_vars(o.params));
      code = with_backend(o, [&](const auto& b) {
        auto pt = scalar_point(b, o.point);
        auto jet = propagate_numeric(b, sys, pt, static_cast<std::uint32_t>(o.level));
        for (const auto& u : sys.unknowns)
          for (long long k = 1; k <= o.level; ++k) {
            VarId v{u.base, static_cast<std::uint32_t>(k)};
            rep.put("jet." + fmt_var(v), b.to_string(jet.at(v)));
          }
        return 0;
      });
    } else if (app.got_subcommand(torsor)) {
      std::vector<EPoly> polys = parse_system(o.system);
      code = with_backend(o, [&](const auto& b) {
        ToleranceSpec tol = apply_tol({}, o);
        auto pt = scalar_point(b, o.point);
        auto tan = scalar_point(b, o.tangent);
        auto res = torsor_residual(b, polys, pt, tan);
        bool ok = true;
        for (std::size_t i = 0; i < res.size(); ++i) {
          rep.put("residual." + std::to_string(i), b.to_string(res[i]));
          if (!b.residual_ok(res[i], tol)) ok = false;
        }
        rep.put("residual_ok", ok);
        return ok ? 0 : 1;
      });
    } else if (app.got_subcommand(solve_jet)) {
      std::vector<EPoly> polys = parse_system(o.system);
      std::vector<VarId> deps = parse_vars(o.dependents);
      code = with_backend(o, [&](const auto& b) {
        auto pt = scalar_point(b, o.point);
        auto given = scalar_point(b, o.tangent);
        auto solved = solve_dependent_tangent(b, polys, deps, pt, given);
        for (const auto& [v, val] : solved)
          rep.put("tangent." + fmt_var(succ(v)), b.to_string(val));
        return 0;
      });
    } else if (app.got_subcommand(newton)) {
      std::vector<EPoly> polys = parse_system(o.system);
      std::vector<VarId> unknowns = parse_vars(o.unknowns);
      if (unknowns.empty()) {
        std::set<VarId> seen;
        for (const auto& p : polys) p.collect_vars(seen);
        unknowns.assign(seen.begin(), seen.end());
      }
      code = with_backend(o, [&](const auto& b) {
        ToleranceSpec tol = apply_tol({}, o);
        auto pt = scalar_point(b, o.point);
        auto sol = newton_solve(b, polys, unknowns, pt, tol);
        for (const auto& u : unknowns) rep.put("solution." + fmt_var(u), b.to_string(sol.at(u)));
        auto res = eval_system(b, polys, sol);
        for (std::size_t i = 0; i < res.size(); ++i)
          rep.put("residual." + std::to_string(i), b.to_string(res[i]));
        return 0;
      });
    } else if (app.got_subcommand(hensel)) {
      std::vector<EPoly> polys = parse_system(o.system);
      std::vector<VarId> unknowns = parse_vars(o.unknowns);
      if (unknowns.empty()) {
        std::set<VarId> seen;
        for (const auto& p : polys) p.collect_vars(seen);
        unknowns.assign(seen.begin(), seen.end());
      }
      Opts oh = o;
      oh.backend = "padic";
      code = with_backend(oh, [&](const auto& b) {
        if constexpr (std::is_same_v<std::decay_t<decltype(b)>, PadicBackend>) {
          RationalPoint seed_pt = rational_point(o.point);
          auto sol = hensel_solve(b, polys, unknowns, seed_pt);
          for (const auto& u : unknowns) rep.put("solution." + fmt_var(u), b.to_string(sol.at(u)));
          auto res = eval_system(b, polys, sol);
          for (std::size_t i = 0; i < res.size(); ++i) {
            rep.put("residual." + std::to_string(i), b.to_string(res[i]));
            rep.put("valuation." + std::to_string(i), res[i].known_valuation(b.prec + 100));
          }
        }
        return 0;
      });
    } else if (app.got_subcommand(eval)) {
      EPoly p = parse_epoly(o.expr);
      code = with_backend(o, [&](const auto& b) {
        auto pt = scalar_point(b, o.point);
        rep.put("value", b.to_string(eval_epoly(b, p, pt)));
        return 0;
      });
    } else if (app.got_subcommand(dle_build)) {
      DLEInstance inst = read_instance(slurp(o.in_path));
      rep.put("order", static_cast<long long>(inst.h.order));
      std::string vs;
      for (const auto& v : inst.h.vars) vs += (vs.empty() ? "" : ",") + v;
      rep.put("vars", vs);
      rep.put("families", static_cast<long long>(inst.h.families.size()));
      for (std::size_t i = 0; i < inst.equations.size(); ++i)
        rep.put("eq." + std::to_string(i), print_epoly(inst.equations[i]));
      rep.put("ineq", print_epoly(inst.inequation));
      if (!o.out_path.empty()) {
        std::ofstream f(o.out_path);
        if (!f.good()) throw PreconditionError("cannot write '" + o.out_path + "'");
        f << write_instance(inst);
        rep.put("out", o.out_path);
      }
    } else if (app.got_subcommand(dle_render)) {
      DLEInstance inst = read_instance(slurp(o.in_path));
      std::string text = render_instance(inst);
      if (o.json_out) {
        json jr;
        jr["render"] = text;
        std::cout << jr.dump(2) << "\n";
      } else {
        std::cout << text;
      }
      return 0;
    } else if (app.got_subcommand(dle_solve)) {
      DLEInstance inst = read_instance(slurp(o.in_path));
      inst.tol = apply_tol(inst.tol, o);
      RationalPoint target = read_jet(slurp(o.target_path));
      std::uint64_t seed = resolve_seed(o);
      code = with_backend(o, [&](const auto& b) {
        auto sol = jet_search(b, inst, target, seed);
        rep.put("seed", static_cast<long long>(seed));
        rep.put("success", sol.success);
        rep.put("residuals_ok", sol.residuals_ok);
        rep.put("inequation_ok", sol.inequation_ok);
        rep.put("neighborhood_ok", sol.neighborhood_ok);
        for (const auto& [v, val] : sol.jet) rep.put("jet." + fmt_var(v), b.to_string(val));
        for (const auto& [v, val] : sol.witnesses)
          rep.put("witness." + fmt_var(v), b.to_string(val));
        for (std::size_t i = 0; i < sol.residuals.size(); ++i)
          rep.put("residual." + std::to_string(i), b.to_string(sol.residuals[i]));
        rep.put("inequation", b.to_string(sol.inequation_value));
        return sol.success ? 0 : 1;
      });
    }

    if (!o.out_path.empty() && !app.got_subcommand(dle_build)) {
      out_file.open(o.out_path);
      if (!out_file.good()) throw PreconditionError("cannot write '" + o.out_path + "'");
      os = &out_file;
    }
    rep.print(*os, o.json_out);
    return code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace expderiv
