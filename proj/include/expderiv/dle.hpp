#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <type_traits>
#include <vector>

#include "expderiv/backends.hpp"
#include "expderiv/derivation.hpp"
#include "expderiv/solve.hpp"
#include "expderiv/term.hpp"

namespace expderiv {

// One dependent jet coordinate together with the Khovanskii system that
// pins it down. The system's unknowns are (dependent at `level`, witnesses
// at order 0); its parameters may only be free coordinates of level <= level
// and declared constants (or their derivative coordinates).
struct KhovanskiiFamily {
  std::uint32_t level = 0;
  std::string dependent;
  std::vector<std::string> witnesses;
  KhovanskiiSystem system;
};

// Dependency structure H for a jet of order `order` in the variables
// `vars` (declaration order matters: partition[i] counts how many leading
// variables are free at level i). Every coordinate past the cut is
// dependent and must come with exactly one family.
struct KhovanskiiFormula {
  std::uint32_t order = 0;
  std::vector<std::string> vars;
  std::vector<std::uint32_t> partition;  // size == order, non-increasing
  std::vector<std::string> constants;
  std::vector<KhovanskiiFamily> families;
};

// ShapeError when the partition is not a partition, a dependent coordinate
// lacks its family (or has two), witnesses collide with anything else, or a
// family's unknowns/parameters stray outside the allowed sets.
void validate_khovanskii_formula(const KhovanskiiFormula& h);

// A starred formula with its dependencies substituted and cleared: the
// star system's equations, every family's equations, and one cleared
// successor clause per family unknown, plus a single aggregated
// inequation (the product of the family jacobian determinants and any
// other denominators; 1 when there are none).
struct DLEInstance {
  FormulaAST phi;
  StarSystem star;
  KhovanskiiFormula h;
  std::vector<EPoly> equations;
  EPoly inequation = EPoly::one();
  ToleranceSpec tol;
};

// Builds the cleared instance. For each family the level-1 symbolic
// propagation t^{1,*} supplies the derivative of every unknown as num/den;
// the clause succ(u) * den - num = 0 is appended and den joins the
// inequation when it is not 1. ShapeError if phi's star order differs from
// h.order or phi mentions variables unknown to h.
DLEInstance build_phi_star_H(const FormulaAST& phi, const KhovanskiiFormula& h,
                             const ToleranceSpec& tol = {});

// Quantifier-free core: every equation as "= 0", the inequation as "!= 0".
FormulaAST instance_core_formula(const DLEInstance& inst);

// Deterministic textual rendering: quantifier prefix over constants and
// jet coordinates, the existential premise with the core on its own
// indented line (re-parseable by parse_formula), and the conclusion shape.
std::string render_instance(const DLEInstance& inst);

// Instance files: sections [PHI], [H], [PHISTARH], [TOLERANCE]. Reading
// rebuilds the cleared system from [PHI] + [H] and cross-checks it against
// the stored [PHISTARH] (ShapeError on mismatch), so hand-edited copies
// cannot drift apart silently. write(read(write(x))) == write(x).
std::string write_instance(const DLEInstance& inst);
DLEInstance read_instance(const std::string& text);

// Jets and seed data as exact rationals, one "var:order=value" line each.
using RationalPoint = std::map<VarId, Rational>;
std::string write_jet(const RationalPoint& jet);
RationalPoint read_jet(const std::string& text);

template <class S>
struct JetSolution {
  Point<S> jet;        // formula variables, orders 0..order
  Point<S> witnesses;  // witness variables and their derivative coordinates
  std::vector<S> residuals;  // one per instance equation, at the final point
  S inequation_value;
  bool residuals_ok = false;
  bool inequation_ok = false;
  bool neighborhood_ok = false;
  bool success = false;
};

namespace detail {

inline Rational rational_power(long long base, std::uint32_t e) {
  Rational r = 1;
  for (std::uint32_t i = 0; i < e; ++i) r *= base;
  return r;
}

// Perturbation sizes: an order of magnitude inside the real neighborhood
// radius, or one valuation level beyond the required p-adic depth.
inline Rational perturbation_unit(const RealBackend&, const ToleranceSpec& tol) {
  long long den = 10;
  while (90.0 / static_cast<double>(den) > tol.radius && den < (1LL << 60)) den *= 10;
  return Rational(1, den);
}

inline Rational perturbation_unit(const PadicBackend& backend, const ToleranceSpec& tol) {
  return rational_power(backend.p, static_cast<std::uint32_t>(tol.nbhd_min_val + 1));
}

}  // namespace detail

// Searches for a jet of the instance near `target` (exact rational values
// for every jet coordinate, witness seed, and constant). The target must
// already satisfy the cleared system loosely and have regular family
// jacobians (InfeasibleTarget otherwise); level-0 free coordinates are
// then perturbed by deterministic seeded rational offsets, level-0
// dependents and witnesses are re-solved (Newton over R, Hensel over Q_p),
// and the higher-order coordinates are completed by a consistent Newton
// pass over the full equation list. Success requires every residual within
// tolerance, a nonvanishing inequation, and the jet staying in the
// target's neighborhood.
template <class B, class S = typename B::Scalar>
JetSolution<S> jet_search(const B& backend, const DLEInstance& inst,
                          const RationalPoint& target, std::uint64_t seed) {
  constexpr bool padic = std::is_same_v<B, PadicBackend>;
  const KhovanskiiFormula& h = inst.h;
  const ToleranceSpec& tol = inst.tol;

  auto scalars = [&](const RationalPoint& rp) {
    Point<S> out;
    for (const auto& [v, r] : rp) out[v] = backend.from_rational(r);
    return out;
  };
  Point<S> tgt = scalars(target);

  // Loose feasibility first: regular family jacobians, and residuals within
  // the square-root half of the stated tolerance.
  for (const auto& fam : h.families) {
    S det = eval_epoly(backend, fam.system.jac_det, tgt);
    if (!backend.det_regular(det, tol))
      throw InfeasibleTarget("family jacobian determinant vanishes at the target (" +
                             fam.dependent + ", level " + std::to_string(fam.level) + ")");
  }
  ToleranceSpec loose = tol;
  loose.eps_res = std::sqrt(tol.eps_res);
  loose.res_min_val = (tol.res_min_val + 1) / 2;
  for (std::size_t i = 0; i < inst.equations.size(); ++i) {
    S r = eval_epoly(backend, inst.equations[i], tgt);
    if (!backend.residual_ok(r, loose))
      throw InfeasibleTarget("target violates cleared equation " + std::to_string(i) +
                             " beyond loose tolerance");
  }

  // Deterministic rational perturbation of the level-0 free coordinates.
  RationalPoint work = target;
  std::mt19937_64 rng(seed);
  auto digit = [&rng] { return static_cast<int>(rng() % 19) - 9; };  // portable in [-9, 9]
  Rational unit = detail::perturbation_unit(backend, tol);
  std::uint32_t l0 = h.order == 0 ? static_cast<std::uint32_t>(h.vars.size()) : h.partition[0];
  for (std::uint32_t j = 0; j < l0; ++j) {
    int k = 0;
    while (k == 0) k = digit();
    VarId v{h.vars[j], 0};
    auto it = work.find(v);
    if (it == work.end()) throw IndexError("target misses jet coordinate " + to_string(v));
    it->second += Rational(k) * unit;
  }

  // Re-solve level-0 dependents and witnesses against the moved frees.
  Point<S> cur = scalars(work);
  for (const auto& fam : h.families) {
    if (fam.level != 0) continue;
    Point<S> sub;
    if constexpr (padic) {
      sub = hensel_solve(backend, fam.system.polys, fam.system.unknowns, work);
    } else {
      sub = newton_solve(backend, fam.system.polys, fam.system.unknowns, cur, tol);
    }
    for (const auto& u : fam.system.unknowns) cur[u] = sub.at(u);
  }

  // Complete the jet: every formula or witness coordinate of order >= 1 is
  // an unknown of the full consistent system, seeded from the target.
  std::set<VarId> seen;
  for (const auto& f : inst.equations) f.collect_vars(seen);
  std::set<std::string> var_set(h.vars.begin(), h.vars.end());
  std::set<std::string> wit_set;
  for (const auto& fam : h.families)
    for (const auto& w : fam.witnesses) wit_set.insert(w);
  std::vector<VarId> top;
  for (const auto& v : seen) {
    if (v.order == 0) continue;
    if (var_set.count(v.base) || wit_set.count(v.base)) top.push_back(v);
  }
  for (const auto& v : top)
    if (!cur.count(v)) cur[v] = backend.zero();
  cur = newton_consistent(backend, inst.equations, top, std::move(cur), tol);

  JetSolution<S> out{{}, {}, {}, backend.zero()};
  out.residuals = eval_system(backend, inst.equations, cur);
  out.residuals_ok = true;
  for (const auto& r : out.residuals)
    if (!backend.residual_ok(r, tol)) out.residuals_ok = false;
  out.inequation_value = eval_epoly(backend, inst.inequation, cur);
  out.inequation_ok = backend.det_regular(out.inequation_value, tol);
  std::vector<VarId> jet_coords;
  for (const auto& [v, val] : cur) {
    if (var_set.count(v.base) && v.order <= h.order) {
      out.jet[v] = val;
      if (tgt.count(v)) jet_coords.push_back(v);
    } else if (wit_set.count(v.base)) {
      out.witnesses[v] = val;
    }
  }
  out.neighborhood_ok = neighborhood_check(backend, out.jet, tgt, jet_coords, tol);
  out.success = out.residuals_ok && out.inequation_ok && out.neighborhood_ok;
  return out;
}

}  // namespace expderiv
