#include "expderiv/dle.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "expderiv/errors.hpp"

namespace expderiv {

namespace {

// Shortest representation that parses back to the same double.
std::string double_to_string(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

Rational parse_rational(const std::string& s) {
  if (s.empty()) throw SyntaxError("empty rational literal", 0);
  for (char c : s)
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '/'))
      throw SyntaxError("bad rational literal '" + s + "'", 0);
  try {
    return Rational(s);
  } catch (const std::exception&) {
    throw SyntaxError("bad rational literal '" + s + "'", 0);
  }
}

}  // namespace

void validate_khovanskii_formula(const KhovanskiiFormula& h) {
  const std::size_t n = h.vars.size();
  if (h.partition.size() != h.order)
    throw ShapeError("partition length must equal the jet order");
  for (std::size_t i = 0; i + 1 < h.partition.size(); ++i)
    if (h.partition[i + 1] > h.partition[i])
      throw ShapeError("partition must be non-increasing across levels");
  if (h.order > 0 && h.partition[0] > n)
    throw ShapeError("partition cut exceeds the variable count");

  std::set<std::string> var_set(h.vars.begin(), h.vars.end());
  if (var_set.size() != n) throw ShapeError("duplicate formula variable");
  std::set<std::string> const_set(h.constants.begin(), h.constants.end());
  for (const auto& c : const_set)
    if (var_set.count(c)) throw ShapeError("constant '" + c + "' collides with a variable");

  auto var_index = [&](const std::string& name) -> std::size_t {  // 1-based, 0 if absent
    for (std::size_t j = 0; j < h.vars.size(); ++j)
      if (h.vars[j] == name) return j + 1;
    return 0;
  };

  std::set<std::string> all_witnesses;
  std::map<std::pair<std::uint32_t, std::string>, int> coverage;
  for (const auto& fam : h.families) {
    if (fam.level >= h.order)
      throw ShapeError("family level " + std::to_string(fam.level) + " is not below the order");
    std::size_t j = var_index(fam.dependent);
    if (j == 0) throw ShapeError("family dependent '" + fam.dependent + "' is not a variable");
    if (j <= h.partition[fam.level])
      throw ShapeError("'" + fam.dependent + "' is free at level " + std::to_string(fam.level));
    ++coverage[{fam.level, fam.dependent}];

    std::set<VarId> expect{VarId{fam.dependent, fam.level}};
    for (const auto& w : fam.witnesses) {
      if (var_set.count(w) || const_set.count(w) || !all_witnesses.insert(w).second)
        throw ShapeError("witness '" + w + "' is not fresh");
      expect.insert(VarId{w, 0});
    }
    std::set<VarId> got(fam.system.unknowns.begin(), fam.system.unknowns.end());
    if (got != expect)
      throw ShapeError("family system unknowns must be the dependent coordinate plus witnesses");

    for (const auto& par : fam.system.parameters) {
      if (const_set.count(par.base)) continue;  // constants and their derivative coordinates
      std::size_t jj = var_index(par.base);
      if (jj == 0 || par.order > fam.level || jj > h.partition[par.order])
        throw ShapeError("family parameter " + to_string(par) +
                         " is not a lower-level free coordinate or constant");
    }
  }

  for (std::uint32_t i = 0; i < h.order; ++i)
    for (std::size_t j = h.partition[i] + 1; j <= n; ++j) {
      auto it = coverage.find({i, h.vars[j - 1]});
      if (it == coverage.end())
        throw ShapeError("dependent coordinate (" + h.vars[j - 1] + ", level " +
                         std::to_string(i) + ") has no family");
      if (it->second != 1)
        throw ShapeError("dependent coordinate (" + h.vars[j - 1] + ", level " +
                         std::to_string(i) + ") has more than one family");
    }
}

DLEInstance build_phi_star_H(const FormulaAST& phi, const KhovanskiiFormula& h,
                             const ToleranceSpec& tol) {
  validate_khovanskii_formula(h);
  StarSystem star = star_transform(phi);
  if (star.order != h.order)
    throw ShapeError("dependency order " + std::to_string(h.order) +
                     " does not match the starred order " + std::to_string(star.order));

  std::set<std::string> allowed(h.vars.begin(), h.vars.end());
  allowed.insert(h.constants.begin(), h.constants.end());
  std::set<VarId> mentioned;
  for (const auto& e : star.equations) e.collect_vars(mentioned);
  for (const auto& e : star.inequations) e.collect_vars(mentioned);
  for (const auto& v : mentioned)
    if (!allowed.count(v.base))
      throw ShapeError("starred formula mentions undeclared variable '" + v.base + "'");

  DLEInstance inst{phi, star, h, {}, EPoly::one(), tol};
  auto push_eq = [&inst](const EPoly& p) {
    if (p == EPoly::zero()) return;
    if (std::find(inst.equations.begin(), inst.equations.end(), p) == inst.equations.end())
      inst.equations.push_back(p);
  };
  std::vector<EPoly> factors;
  auto push_factor = [&factors](const EPoly& p) {
    if (p == EPoly::one()) return;
    if (std::find(factors.begin(), factors.end(), p) == factors.end()) factors.push_back(p);
  };

  for (const auto& e : star.equations) push_eq(e);
  for (const auto& e : star.inequations) push_factor(e);

  for (const auto& fam : h.families) {
    for (const auto& p : fam.system.polys) push_eq(p);
    auto level1 = propagate_symbolic(fam.system, 1)[0];
    for (std::size_t j = 0; j < fam.system.unknowns.size(); ++j) {
      const ERational& t = level1[j];
      push_eq(EPoly::var(succ(fam.system.unknowns[j])) * t.den - t.num);
      push_factor(t.den);
    }
    push_factor(fam.system.jac_det);
  }

  for (const auto& f : factors) inst.inequation = inst.inequation * f;
  return inst;
}

FormulaAST instance_core_formula(const DLEInstance& inst) {
  FormulaAST f;
  for (const auto& e : inst.equations) f.atoms.push_back({epoly_to_term(e), true});
  f.atoms.push_back({epoly_to_term(inst.inequation), false});
  return f;
}

std::string render_instance(const DLEInstance& inst) {
  std::ostringstream os;
  std::string coords;
  for (std::uint32_t k = 0; k <= inst.h.order; ++k)
    for (const auto& v : inst.h.vars) coords += (coords.empty() ? "" : " ") + v + ":" + std::to_string(k);
  std::string wits;
  for (const auto& fam : inst.h.families)
    for (const auto& w : fam.witnesses) wits += " " + w;
  os << "forall d\n";
  os << "forall " << coords << "\n";
  os << "premise: exists" << wits << "\n";
  os << "  " << print_formula(instance_core_formula(inst)) << "\n";
  os << "conclusion: exists alpha\n";
  os << "  phi(alpha) & chi(jet_" << inst.h.order << "(alpha) - (" << coords << "), d)\n";
  os << "phi: " << print_formula(inst.phi) << "\n";
  if (!inst.h.constants.empty()) {
    os << "constants:";
    for (const auto& c : inst.h.constants) os << " " << c;
    os << "\n";
  }
  return os.str();
}

std::string write_instance(const DLEInstance& inst) {
  std::ostringstream os;
  os << "[PHI]\n" << print_formula(inst.phi) << "\n";
  os << "[H]\n";
  os << "order " << inst.h.order << "\n";
  os << "vars";
  for (const auto& v : inst.h.vars) os << " " << v;
  os << "\n";
  os << "partition";
  for (auto l : inst.h.partition) os << " " << l;
  os << "\n";
  os << "constants";
  for (const auto& c : inst.h.constants) os << " " << c;
  os << "\n";
  for (const auto& fam : inst.h.families) {
    os << "family level=" << fam.level << " dependent=" << fam.dependent << " witnesses=";
    for (std::size_t i = 0; i < fam.witnesses.size(); ++i)
      os << (i ? "," : "") << fam.witnesses[i];
    os << "\n";
    for (const auto& p : fam.system.polys) os << "poly " << print_epoly(p) << "\n";
    os << "end\n";
  }
  os << "[PHISTARH]\n";
  for (const auto& e : inst.equations) os << "eq " << print_epoly(e) << "\n";
  os << "ineq " << print_epoly(inst.inequation) << "\n";
  os << "[TOLERANCE]\n";
  os << "eps_res " << double_to_string(inst.tol.eps_res) << "\n";
  os << "eps_reg " << double_to_string(inst.tol.eps_reg) << "\n";
  os << "radius " << double_to_string(inst.tol.radius) << "\n";
  os << "res_min_val " << inst.tol.res_min_val << "\n";
  os << "reg_max_val " << inst.tol.reg_max_val << "\n";
  os << "nbhd_min_val " << inst.tol.nbhd_min_val << "\n";
  return os.str();
}

DLEInstance read_instance(const std::string& text) {
  std::istringstream is(text);
  std::string line, section;
  FormulaAST phi;
  bool have_phi = false;
  KhovanskiiFormula h;
  std::vector<EPoly> stored_eqs;
  EPoly stored_ineq = EPoly::one();
  bool have_ineq = false;
  ToleranceSpec tol;
  KhovanskiiFamily cur;
  std::vector<EPoly> cur_polys;
  bool in_family = false;

  auto finish_family = [&]() {
    if (!in_family) return;
    std::set<VarId> unknown_set{VarId{cur.dependent, cur.level}};
    for (const auto& w : cur.witnesses) unknown_set.insert(VarId{w, 0});
    std::set<VarId> seen;
    for (const auto& p : cur_polys) p.collect_vars(seen);
    VarPartition part;
    part.unknowns.assign(unknown_set.begin(), unknown_set.end());
    for (const auto& v : seen)
      if (!unknown_set.count(v)) part.parameters.push_back(v);
    cur.system = khovanskii_build(cur_polys, part);
    h.families.push_back(cur);
    cur = {};
    cur_polys.clear();
    in_family = false;
  };

  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line[0] == '[') {
      finish_family();
      section = line;
      continue;
    }
    if (section == "[PHI]") {
      phi = parse_formula(line);
      have_phi = true;
    } else if (section == "[H]") {
      auto toks = split_ws(line);
      if (toks.empty()) continue;
      if (toks[0] == "order" && toks.size() == 2) {
        h.order = static_cast<std::uint32_t>(std::stoul(toks[1]));
      } else if (toks[0] == "vars") {
        h.vars.assign(toks.begin() + 1, toks.end());
      } else if (toks[0] == "partition") {
        for (std::size_t i = 1; i < toks.size(); ++i)
          h.partition.push_back(static_cast<std::uint32_t>(std::stoul(toks[i])));
      } else if (toks[0] == "constants") {
        h.constants.assign(toks.begin() + 1, toks.end());
      } else if (toks[0] == "family") {
        finish_family();
        in_family = true;
        for (std::size_t i = 1; i < toks.size(); ++i) {
          auto eq = toks[i].find('=');
          if (eq == std::string::npos) throw SyntaxError("bad family attribute " + toks[i], 0);
          std::string key = toks[i].substr(0, eq), val = toks[i].substr(eq + 1);
          if (key == "level") {
            cur.level = static_cast<std::uint32_t>(std::stoul(val));
          } else if (key == "dependent") {
            cur.dependent = val;
          } else if (key == "witnesses") {
            std::istringstream ws(val);
            std::string w;
            while (std::getline(ws, w, ','))
              if (!w.empty()) cur.witnesses.push_back(w);
          } else {
            throw SyntaxError("unknown family attribute '" + key + "'", 0);
          }
        }
      } else if (toks[0] == "poly") {
        if (!in_family) throw SyntaxError("poly line outside a family block", 0);
        if (toks.size() < 2) throw SyntaxError("empty poly line", 0);
        cur_polys.push_back(parse_epoly(line.substr(line.find("poly ") + 5)));
      } else if (toks[0] == "end") {
        if (!in_family) throw SyntaxError("end line outside a family block", 0);
        finish_family();
      } else {
        throw SyntaxError("unknown [H] line '" + line + "'", 0);
      }
    } else if (section == "[PHISTARH]") {
      if (line.rfind("eq ", 0) == 0) {
        stored_eqs.push_back(parse_epoly(line.substr(3)));
      } else if (line.rfind("ineq ", 0) == 0) {
        stored_ineq = parse_epoly(line.substr(5));
        have_ineq = true;
      } else {
        throw SyntaxError("unknown [PHISTARH] line '" + line + "'", 0);
      }
    } else if (section == "[TOLERANCE]") {
      auto toks = split_ws(line);
      if (toks.size() != 2) throw SyntaxError("bad tolerance line '" + line + "'", 0);
      if (toks[0] == "eps_res") tol.eps_res = std::stod(toks[1]);
      else if (toks[0] == "eps_reg") tol.eps_reg = std::stod(toks[1]);
      else if (toks[0] == "radius") tol.radius = std::stod(toks[1]);
      else if (toks[0] == "res_min_val") tol.res_min_val = std::stoll(toks[1]);
      else if (toks[0] == "reg_max_val") tol.reg_max_val = std::stoll(toks[1]);
      else if (toks[0] == "nbhd_min_val") tol.nbhd_min_val = std::stoll(toks[1]);
      else throw SyntaxError("unknown tolerance key '" + toks[0] + "'", 0);
    } else {
      throw SyntaxError("line outside any section: '" + line + "'", 0);
    }
  }
  finish_family();
  if (!have_phi) throw SyntaxError("instance file lacks a [PHI] section", 0);

  DLEInstance inst = build_phi_star_H(phi, h, tol);
  if (have_ineq || !stored_eqs.empty()) {
    if (stored_eqs != inst.equations || !(stored_ineq == inst.inequation))
      throw ShapeError("stored cleared system does not match its rebuild from [PHI] and [H]");
  }
  return inst;
}

std::string write_jet(const RationalPoint& jet) {
  std::ostringstream os;
  for (const auto& [v, r] : jet)
    os << v.base << ":" << v.order << "=" << rat_to_string(r) << "\n";
  return os.str();
}

RationalPoint read_jet(const std::string& text) {
  RationalPoint out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto colon = line.find(':');
    auto equals = line.find('=', colon == std::string::npos ? 0 : colon);
    if (colon == std::string::npos || equals == std::string::npos || colon == 0)
      throw SyntaxError("bad jet line '" + line + "' (want var:order=value)", 0);
    VarId v{line.substr(0, colon), 0};
    std::string ord = line.substr(colon + 1, equals - colon - 1);
    try {
      v.order = static_cast<std::uint32_t>(std::stoul(ord));
    } catch (const std::exception&) {
      throw SyntaxError("bad jet order '" + ord + "'", 0);
    }
    out[v] = parse_rational(line.substr(equals + 1));
  }
  return out;
}

}  // namespace expderiv
