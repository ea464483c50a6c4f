#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "expderiv/dle.hpp"
#include "expderiv/errors.hpp"
#include "expderiv/torsor.hpp"

using namespace expderiv;

namespace {

EPoly v(const std::string& name, std::uint32_t order = 0) {
  return EPoly::var(VarId{name, order});
}

KhovanskiiFamily make_family(std::uint32_t level, const std::string& dependent,
                             std::vector<std::string> witnesses, std::vector<EPoly> polys) {
  KhovanskiiFamily fam{level, dependent, std::move(witnesses), {}};
  VarPartition part;
  part.unknowns.push_back(VarId{dependent, level});
  for (const auto& w : fam.witnesses) part.unknowns.push_back(VarId{w, 0});
  std::set<VarId> unknown_set(part.unknowns.begin(), part.unknowns.end());
  std::set<VarId> seen;
  for (const auto& p : polys) p.collect_vars(seen);
  for (const auto& vv : seen)
    if (!unknown_set.count(vv)) part.parameters.push_back(vv);
  fam.system = khovanskii_build(std::move(polys), std::move(part));
  return fam;
}

bool formula_equal(const FormulaAST& a, const FormulaAST& b) {
  if (a.atoms.size() != b.atoms.size()) return false;
  for (std::size_t i = 0; i < a.atoms.size(); ++i)
    if (a.atoms[i].is_equation != b.atoms[i].is_equation ||
        !term_equal(a.atoms[i].term, b.atoms[i].term))
      return false;
  return true;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// The five shipped demonstration instances with their target jets.
const char* kDemoNames[] = {"identity_flow", "constant_log2", "scaled_growth", "exp_pair",
                            "sqrt6_5adic"};

DLEInstance demo_instance(const std::string& name) {
  return read_instance(slurp(std::string(DEMO_DIR) + "/" + name + ".dle"));
}

RationalPoint demo_jet(const std::string& name) {
  return read_jet(slurp(std::string(DEMO_DIR) + "/" + name + ".jet"));
}

}  // namespace

TEST_CASE("dependency structures are validated") {
  KhovanskiiFormula h;
  h.order = 1;
  h.vars = {"x"};
  h.partition = {1};
  CHECK_NOTHROW(validate_khovanskii_formula(h));

  h.partition = {1, 1};
  CHECK_THROWS_AS(validate_khovanskii_formula(h), ShapeError);
  h.partition = {2};
  CHECK_THROWS_AS(validate_khovanskii_formula(h), ShapeError);

  // A dependent coordinate needs exactly one family.
  h.partition = {0};
  CHECK_THROWS_AS(validate_khovanskii_formula(h), ShapeError);
  h.families.push_back(make_family(0, "x", {}, {exp_apply(v("x")) - EPoly::constant(2)}));
  CHECK_NOTHROW(validate_khovanskii_formula(h));
  h.families.push_back(h.families[0]);
  CHECK_THROWS_AS(validate_khovanskii_formula(h), ShapeError);
  h.families.pop_back();

  // Witnesses must not collide with formula variables.
  KhovanskiiFormula bad = h;
  bad.families[0].witnesses = {"x"};
  CHECK_THROWS_AS(validate_khovanskii_formula(bad), ShapeError);

  // A family on a free coordinate is rejected.
  KhovanskiiFormula free_fam = h;
  free_fam.partition = {1};
  CHECK_THROWS_AS(validate_khovanskii_formula(free_fam), ShapeError);

  // Parameters must be lower-level free coordinates or constants.
  KhovanskiiFormula two;
  two.order = 1;
  two.vars = {"x", "y"};
  two.partition = {1};
  two.families.push_back(make_family(0, "y", {}, {v("y") - exp_apply(v("y", 1))}));
  CHECK_THROWS_AS(validate_khovanskii_formula(two), ShapeError);
  two.families[0] = make_family(0, "y", {}, {v("y") - exp_apply(v("x"))});
  CHECK_NOTHROW(validate_khovanskii_formula(two));

  // Monotone partitions only.
  KhovanskiiFormula rising;
  rising.order = 2;
  rising.vars = {"x"};
  rising.partition = {0, 1};
  rising.families.push_back(
      make_family(0, "x", {}, {v("x") * v("x") - EPoly::constant(2)}));
  CHECK_THROWS_AS(validate_khovanskii_formula(rising), ShapeError);
}

TEST_CASE("building the trivial instance") {
  FormulaAST phi = parse_formula("D(x) - x = 0");
  KhovanskiiFormula h;
  h.order = 1;
  h.vars = {"x"};
  h.partition = {1};
  DLEInstance inst = build_phi_star_H(phi, h);
  REQUIRE(inst.equations.size() == 1);
  CHECK(inst.equations[0] == v("x", 1) - v("x"));
  CHECK(inst.inequation == EPoly::one());
}

TEST_CASE("building with a dependent base coordinate") {
  FormulaAST phi = parse_formula("D(x) - x = 0");
  KhovanskiiFormula h;
  h.order = 1;
  h.vars = {"x"};
  h.partition = {0};
  h.families.push_back(make_family(0, "x", {}, {exp_apply(v("x")) - EPoly::constant(2)}));
  DLEInstance inst = build_phi_star_H(phi, h);

  // Star equation, the family itself, and the cleared derivative clause
  // x' = 0 (the family has no parameters, so its propagated numerator
  // vanishes); the inequation collects the family jacobian determinant.
  REQUIRE(inst.equations.size() == 3);
  CHECK(inst.equations[0] == v("x", 1) - v("x"));
  CHECK(inst.equations[1] == exp_apply(v("x")) - EPoly::constant(2));
  CHECK(inst.equations[2] == v("x", 1));
  CHECK(inst.inequation == exp_apply(v("x")));
}

TEST_CASE("order mismatch is a shape error") {
  KhovanskiiFormula h;
  h.order = 1;
  h.vars = {"x"};
  h.partition = {1};
  CHECK_THROWS_AS(build_phi_star_H(parse_formula("D(D(x)) - x = 0"), h), ShapeError);
  CHECK_THROWS_AS(build_phi_star_H(parse_formula("D(y) - y = 0"), h), ShapeError);
}

TEST_CASE("clauses carry the symbolic first derivative") {
  DLEInstance inst = demo_instance("exp_pair");
  REQUIRE(inst.equations.size() == 3);
  CHECK(inst.equations[0] == v("x1", 1) - v("x2"));
  CHECK(inst.equations[1] == v("x2") - exp_apply(v("x1")));
  CHECK(inst.equations[2] == v("x2", 1) - v("x1", 1) * exp_apply(v("x1")));
  CHECK(inst.inequation == EPoly::one());
}

TEST_CASE("nontrivial denominators are cleared into the inequation") {
  // x^2 = c with constant c: the derivative clause multiplies through by
  // the jacobian 2x, which then joins the inequation exactly once.
  FormulaAST phi = parse_formula("D(x) = 0");
  KhovanskiiFormula h;
  h.order = 1;
  h.vars = {"x"};
  h.partition = {0};
  h.constants = {"c"};
  h.families.push_back(make_family(0, "x", {}, {v("x") * v("x") - v("c")}));
  DLEInstance inst = build_phi_star_H(phi, h);
  EPoly clause = v("x", 1) * (EPoly::constant(2) * v("x")) - v("c", 1);
  CHECK(std::find(inst.equations.begin(), inst.equations.end(), clause) != inst.equations.end());
  CHECK(inst.inequation == EPoly::constant(2) * v("x"));

  // Clearing is sound: at any point with 2x != 0 the clause equals the
  // uncleared substitution x' - c'/(2x) scaled by 2x.
  RealBackend rb;
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    Point<double> pt;
    auto draw = [&rng] { return static_cast<double>(static_cast<int>(rng() % 2001) - 1000) / 250.0; };
    pt[VarId{"x", 0}] = draw();
    pt[VarId{"x", 1}] = draw();
    pt[VarId{"c", 1}] = draw();
    double den = 2.0 * pt[VarId{"x", 0}];
    if (std::abs(den) < 1e-3) continue;
    double cleared = eval_epoly(rb, clause, pt);
    double substituted = pt[VarId{"x", 1}] - pt[VarId{"c", 1}] / den;
    CHECK(std::abs(cleared - substituted * den) <= 1e-9);
  }
}

TEST_CASE("aggregated inequation is the product over families") {
  FormulaAST phi = parse_formula("D(x) = 0 & D(y) = 0");
  KhovanskiiFormula h;
  h.order = 1;
  h.vars = {"x", "y"};
  h.partition = {0};
  h.families.push_back(make_family(0, "x", {}, {v("x") * v("x") - EPoly::constant(6)}));
  h.families.push_back(make_family(0, "y", {}, {v("y") * v("y") - EPoly::constant(7)}));
  DLEInstance inst = build_phi_star_H(phi, h);
  CHECK(inst.inequation ==
        (EPoly::constant(2) * v("x")) * (EPoly::constant(2) * v("y")));
}

TEST_CASE("rendering is deterministic with a re-parseable core") {
  DLEInstance inst = demo_instance("identity_flow");
  std::string text = render_instance(inst);
  CHECK(text ==
        "forall d\n"
        "forall x:0 x:1\n"
        "premise: exists\n"
        "  -x+x_d1 = 0 & 1 != 0\n"
        "conclusion: exists alpha\n"
        "  phi(alpha) & chi(jet_1(alpha) - (x:0 x:1), d)\n"
        "phi: D(x)-x = 0\n");
  CHECK(render_instance(inst) == text);

  for (const auto* name : kDemoNames) {
    DLEInstance d = demo_instance(name);
    FormulaAST core = instance_core_formula(d);
    CHECK(formula_equal(parse_formula(print_formula(core)), core));
    CHECK(render_instance(d) == render_instance(demo_instance(name)));
  }
}

TEST_CASE("instance files round trip") {
  for (const auto* name : kDemoNames) {
    DLEInstance inst = demo_instance(name);
    std::string once = write_instance(inst);
    DLEInstance back = read_instance(once);
    CHECK(write_instance(back) == once);
    CHECK(back.equations == inst.equations);
    CHECK(back.inequation == inst.inequation);
    CHECK(back.tol.eps_res == inst.tol.eps_res);
    CHECK(back.h.partition == inst.h.partition);
  }

  // Tampering with the stored cleared system is caught on read.
  std::string text = write_instance(demo_instance("identity_flow"));
  auto pos = text.find("eq -x");
  REQUIRE(pos != std::string::npos);
  std::string tampered = text;
  tampered.erase(pos + 3, 1);  // "eq -x+x_d1" becomes "eq x+x_d1"
  CHECK_THROWS_AS(read_instance(tampered), ShapeError);
}

TEST_CASE("jet files round trip") {
  RationalPoint jet;
  jet[VarId{"x", 0}] = Rational(1);
  jet[VarId{"x", 1}] = Rational(-7, 3);
  jet[VarId{"z1", 0}] = Rational(22, 7);
  std::string text = write_jet(jet);
  CHECK(read_jet(text) == jet);
  CHECK(write_jet(read_jet(text)) == text);
  CHECK_THROWS_AS(read_jet("x=1"), SyntaxError);
  CHECK_THROWS_AS(read_jet("x:one=1"), SyntaxError);
  CHECK_THROWS_AS(read_jet("x:0=1.5"), SyntaxError);
}

TEST_CASE("jet search finds the trivial jet") {
  DLEInstance inst = demo_instance("identity_flow");
  RationalPoint target = demo_jet("identity_flow");
  RealBackend rb;
  auto sol = jet_search(rb, inst, target, 7);
  CHECK(sol.success);
  CHECK(sol.residuals_ok);
  CHECK(sol.inequation_ok);
  CHECK(sol.neighborhood_ok);
  double x0 = sol.jet.at(VarId{"x", 0});
  double x1 = sol.jet.at(VarId{"x", 1});
  CHECK(x0 != 1.0);  // the free coordinate was perturbed
  CHECK(std::abs(x0 - 1.0) <= 1e-3);
  CHECK(std::abs(x1 - x0) <= 1e-10);

  // Same seed, same jet; a different seed moves the free coordinate.
  auto again = jet_search(rb, inst, target, 7);
  CHECK(again.jet.at(VarId{"x", 0}) == x0);
  auto other = jet_search(rb, inst, target, 8);
  CHECK(other.jet.at(VarId{"x", 0}) != x0);
}

TEST_CASE("jet search solves a dependent coordinate") {
  DLEInstance inst = demo_instance("constant_log2");
  RationalPoint target = demo_jet("constant_log2");
  RealBackend rb;
  auto sol = jet_search(rb, inst, target, 3);
  CHECK(sol.success);
  CHECK(std::abs(sol.jet.at(VarId{"x", 0}) - std::log(2.0)) <= 1e-9);
  CHECK(std::abs(sol.jet.at(VarId{"x", 1})) <= 1e-12);
}

TEST_CASE("jet search honors constants from the target") {
  DLEInstance inst = demo_instance("scaled_growth");
  RationalPoint target = demo_jet("scaled_growth");
  RealBackend rb;
  auto sol = jet_search(rb, inst, target, 11);
  CHECK(sol.success);
  double x0 = sol.jet.at(VarId{"x", 0});
  double x1 = sol.jet.at(VarId{"x", 1});
  CHECK(std::abs(x1 - 2.0 * x0) <= 1e-10);
}

TEST_CASE("jet search completes a coupled pair") {
  DLEInstance inst = demo_instance("exp_pair");
  RationalPoint target = demo_jet("exp_pair");
  RealBackend rb;
  auto sol = jet_search(rb, inst, target, 5);
  CHECK(sol.success);
  double a0 = sol.jet.at(VarId{"x1", 0});
  double b0 = sol.jet.at(VarId{"x2", 0});
  double a1 = sol.jet.at(VarId{"x1", 1});
  double b1 = sol.jet.at(VarId{"x2", 1});
  CHECK(std::abs(b0 - std::exp(a0)) <= 1e-10);
  CHECK(std::abs(a1 - b0) <= 1e-10);
  CHECK(std::abs(b1 - a1 * std::exp(a0)) <= 1e-9);

  // The first-order part of a successful jet zeroes the torsor residuals
  // of every level-0 family.
  for (const auto& fam : inst.h.families) {
    Point<double> base, tangent;
    std::set<VarId> used;
    for (const auto& p : fam.system.polys) p.collect_vars(used);
    for (const auto& u : used) {
      base[u] = sol.jet.at(u);
      tangent[u] = sol.jet.at(succ(u));
    }
    for (double r : torsor_residual(rb, fam.system.polys, base, tangent))
      CHECK(std::abs(r) <= 1e-9);
  }
}

TEST_CASE("infeasible targets are rejected") {
  RealBackend rb;
  {
    // Vanishing family jacobian at the target.
    FormulaAST phi = parse_formula("D(x) = 0");
    KhovanskiiFormula h;
    h.order = 1;
    h.vars = {"x"};
    h.partition = {0};
    h.families.push_back(make_family(0, "x", {}, {v("x") * v("x") - EPoly::constant(4)}));
    DLEInstance inst = build_phi_star_H(phi, h);
    RationalPoint target;
    target[VarId{"x", 0}] = 0;
    target[VarId{"x", 1}] = 0;
    CHECK_THROWS_AS(jet_search(rb, inst, target, 1), InfeasibleTarget);
  }
  {
    // Residuals far outside the loose tolerance.
    DLEInstance inst = demo_instance("constant_log2");
    RationalPoint target;
    target[VarId{"x", 0}] = 5;
    target[VarId{"x", 1}] = 0;
    CHECK_THROWS_AS(jet_search(rb, inst, target, 1), InfeasibleTarget);
  }
}

TEST_CASE("jet search lifts 5-adically") {
  DLEInstance inst = demo_instance("sqrt6_5adic");
  RationalPoint target = demo_jet("sqrt6_5adic");
  PadicBackend qp{5, 12};
  auto sol = jet_search(qp, inst, target, 21);
  CHECK(sol.success);
  Padic x0 = sol.jet.at(VarId{"x", 0});
  CHECK(x0.residue_mod(2) == 16 % 25);
  CHECK((x0 * x0 - qp.from_rational(6)).known_valuation(qp.prec) >= 12);
  Padic x1 = sol.jet.at(VarId{"x", 1});
  CHECK(x1.known_valuation(qp.prec) >= qp.prec);

  // The p-adic torsor closure mirrors the real one.
  const auto& fam = inst.h.families[0];
  Point<Padic> base{{VarId{"x", 0}, x0}};
  Point<Padic> tangent{{VarId{"x", 0}, x1}};
  for (const Padic& r : torsor_residual(qp, fam.system.polys, base, tangent))
    CHECK(qp.residual_ok(r, inst.tol));
}
