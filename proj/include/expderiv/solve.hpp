#pragma once

#include <vector>

#include "expderiv/backends.hpp"
#include "expderiv/derivation.hpp"

namespace expderiv {

template <class B, class S = typename B::Scalar>
std::vector<S> eval_system(const B& backend, const std::vector<EPoly>& polys,
                           const Point<S>& pt) {
  std::vector<S> out;
  out.reserve(polys.size());
  for (const auto& f : polys) out.push_back(eval_epoly(backend, f, pt));
  return out;
}

template <class B, class S = typename B::Scalar>
Mat<S> eval_gradient_matrix(const B& backend, const std::vector<EPoly>& polys,
                            const std::vector<VarId>& vars, const Point<S>& pt) {
  Mat<S> J(polys.size(), vars.size(), backend.zero());
  for (std::size_t i = 0; i < polys.size(); ++i)
    for (std::size_t j = 0; j < vars.size(); ++j)
      J.at(i, j) = eval_epoly(backend, partial_derivative(polys[i], vars[j]), pt);
  return J;
}

// Damped-free Newton iteration on a square system; unknowns must already
// have seed values in `start`. Returns the full point with unknowns updated.
template <class B, class S = typename B::Scalar>
Point<S> newton_solve(const B& backend, const std::vector<EPoly>& polys,
                      const std::vector<VarId>& unknowns, Point<S> start,
                      const ToleranceSpec& tol, int max_iter = 50) {
  if (polys.size() != unknowns.size())
    throw ShapeError("newton iteration requires a square system");
  std::vector<std::vector<EPoly>> partials(polys.size());
  for (std::size_t i = 0; i < polys.size(); ++i)
    for (const auto& u : unknowns) partials[i].push_back(partial_derivative(polys[i], u));
  for (int it = 0; it < max_iter; ++it) {
    std::vector<S> f = eval_system(backend, polys, start);
    bool done = true;
    for (const auto& r : f)
      if (!backend.residual_ok(r, tol)) done = false;
    if (done) return start;
    Mat<S> J(polys.size(), unknowns.size(), backend.zero());
    for (std::size_t i = 0; i < polys.size(); ++i)
      for (std::size_t j = 0; j < unknowns.size(); ++j)
        J.at(i, j) = eval_epoly(backend, partials[i][j], start);
    for (auto& r : f) r = -r;
    std::vector<S> step = linear_solve(backend, J, f);
    for (std::size_t j = 0; j < unknowns.size(); ++j)
      start[unknowns[j]] = start[unknowns[j]] + step[j];
  }
  throw NoConvergence("newton iteration did not reach residual tolerance");
}

// Newton iteration on a consistent rectangular system. Rows may outnumber
// unknowns (redundant equations are fine as long as they vanish together)
// and rows that do not mention any unknown only take part in the
// convergence test. Steps come from consistent_solve; convergence is
// judged on the full residual vector.
template <class B, class S = typename B::Scalar>
Point<S> newton_consistent(const B& backend, const std::vector<EPoly>& polys,
                           const std::vector<VarId>& unknowns, Point<S> start,
                           const ToleranceSpec& tol, int max_iter = 50) {
  if (unknowns.empty()) {
    for (const auto& r : eval_system(backend, polys, start))
      if (!backend.residual_ok(r, tol))
        throw NoConvergence("fully determined system misses residual tolerance");
    return start;
  }
  std::vector<std::vector<EPoly>> partials(polys.size());
  for (std::size_t i = 0; i < polys.size(); ++i)
    for (const auto& u : unknowns) partials[i].push_back(partial_derivative(polys[i], u));
  for (int it = 0; it < max_iter; ++it) {
    std::vector<S> f = eval_system(backend, polys, start);
    bool done = true;
    for (const auto& r : f)
      if (!backend.residual_ok(r, tol)) done = false;
    if (done) return start;
    Mat<S> J(polys.size(), unknowns.size(), backend.zero());
    for (std::size_t i = 0; i < polys.size(); ++i)
      for (std::size_t j = 0; j < unknowns.size(); ++j)
        J.at(i, j) = eval_epoly(backend, partials[i][j], start);
    for (auto& r : f) r = -r;
    std::vector<S> step = consistent_solve(backend, J, f);
    for (std::size_t j = 0; j < unknowns.size(); ++j)
      start[unknowns[j]] = start[unknowns[j]] + step[j];
  }
  throw NoConvergence("newton iteration did not reach residual tolerance");
}

// Newton over Q_p from an exact rational seed, with the classical
// sufficient condition checked there: min_i v(f_i(a)) > 2 v(det J(a)).
// A positive determinant valuation makes every late step erode one digit
// of absolute precision, so the lift runs at a guarded internal precision
// and the result is truncated back to the backend's advertised precision,
// which it then carries in full.
inline Point<Padic> hensel_solve(const PadicBackend& backend, const std::vector<EPoly>& polys,
                                 const std::vector<VarId>& unknowns,
                                 const Point<Rational>& seed) {
  if (polys.size() != unknowns.size())
    throw ShapeError("hensel lifting requires a square system");
  PadicBackend probe{backend.p, backend.prec + 8};
  Point<Padic> at_seed;
  for (const auto& [var, r] : seed) at_seed[var] = probe.from_rational(r);
  Mat<Padic> J0 = eval_gradient_matrix(probe, polys, unknowns, at_seed);
  Padic det0 = mat_det(probe, J0);
  if (det0.is_zeroish())
    throw HenselConditionFailed("jacobian determinant indistinguishable from zero at the seed");
  long long dv = det0.valuation();
  long long v0 = probe.prec;
  for (const auto& r : eval_system(probe, polys, at_seed)) {
    long long kv = r.known_valuation(probe.prec);
    if (kv <= 2 * dv)
      throw HenselConditionFailed(
          "residual valuation at seed does not exceed twice the jacobian determinant valuation");
    v0 = std::min(v0, kv);
  }
  // Each quadratic round takes the residual valuation v to 2(v - dv) and,
  // when det J is not a unit, erodes dv digits of the iterate's relative
  // precision. Size the working precision so the target depth stays
  // certifiable after the rounds the seed actually needs.
  const long long target = backend.prec + dv + 2;
  long long rounds = 0;
  for (long long v = v0; v < target && rounds < 64; ++rounds) v = 2 * (v - dv);
  ToleranceSpec full;
  full.res_min_val = target;
  long long guard = 2 * dv + 4 + rounds * dv;
  for (int attempt = 0;; ++attempt) {
    PadicBackend wide{backend.p, backend.prec + static_cast<int>(guard)};
    Point<Padic> start;
    for (const auto& [var, r] : seed) start[var] = wide.from_rational(r);
    try {
      Point<Padic> sol =
          newton_solve(wide, polys, unknowns, std::move(start), full, wide.prec + 8);
      Point<Padic> out;
      for (const auto& [var, x] : sol) {
        out[var] = x.is_zeroish()
                       ? x.truncated_abs(backend.prec)
                       : Padic::from_parts(backend.p, backend.prec, x.valuation(), x.unit());
      }
      return out;
    } catch (const NoConvergence&) {
      if (attempt == 2) throw;
    } catch (const SingularJacobian&) {
      if (attempt == 2) throw;
    }
    guard += backend.prec / 2 + 4;
  }
}

template <class S>
struct SolutionCheck {
  std::vector<S> residuals;
  S jac_det;
  bool residuals_ok = false;
  bool regular = false;
  std::size_t dim_bound = 0;  // number of parameters of the system
  bool verdict() const { return residuals_ok && regular; }
};

// Does the point satisfy the system, and is it a regular (invertible
// jacobian) solution? dim_bound reports the parameter count, which bounds
// the dimension of the solution family near a regular point.
template <class B, class S = typename B::Scalar>
SolutionCheck<S> khovanskii_check(const B& backend, const KhovanskiiSystem& sys,
                                  const Point<S>& pt, const ToleranceSpec& tol) {
  SolutionCheck<S> rep{{}, backend.zero(), false, false, sys.parameters.size()};
  rep.residuals = eval_system(backend, sys.polys, pt);
  rep.residuals_ok = true;
  for (const auto& r : rep.residuals)
    if (!backend.residual_ok(r, tol)) rep.residuals_ok = false;
  rep.jac_det = eval_epoly(backend, sys.jac_det, pt);
  rep.regular = backend.det_regular(rep.jac_det, tol);
  return rep;
}

template <class B, class S = typename B::Scalar>
bool regular_point_check(const B& backend, const std::vector<EPoly>& polys,
                         const std::vector<VarId>& vars, const Point<S>& pt,
                         const ToleranceSpec& tol) {
  return full_row_rank(backend, eval_gradient_matrix(backend, polys, vars, pt), tol);
}

// Numeric jet propagation. Each shifted system is linear in its top-order
// variables with the base-point jacobian as coefficient matrix, so one
// factorization shape drives every level: evaluate the shift with the
// unknown top-order slots at zero, negate, solve. Parameter jets up to
// `level` must be supplied in `pt`.
template <class B, class S = typename B::Scalar>
Point<S> propagate_numeric(const B& backend, const KhovanskiiSystem& sys,
                           Point<S> pt, std::uint32_t level) {
  Mat<S> J = eval_gradient_matrix(backend, sys.polys, sys.unknowns, pt);
  std::vector<EPoly> shifted = sys.polys;
  for (std::uint32_t k = 1; k <= level; ++k) {
    for (auto& f : shifted) f = delta_shift(f);
    for (const auto& u : sys.unknowns) pt[VarId{u.base, k}] = backend.zero();
    std::vector<S> rhs = eval_system(backend, shifted, pt);
    for (auto& r : rhs) r = -r;
    std::vector<S> top = linear_solve(backend, J, rhs);
    for (std::size_t j = 0; j < sys.unknowns.size(); ++j)
      pt[VarId{sys.unknowns[j].base, k}] = top[j];
  }
  return pt;
}

// All listed coordinates of the two points agree within the tolerance's
// neighborhood radius (real) or to the required valuation depth (p-adic).
template <class B, class S = typename B::Scalar>
bool neighborhood_check(const B& backend, const Point<S>& a, const Point<S>& b,
                        const std::vector<VarId>& vars, const ToleranceSpec& tol) {
  for (const auto& v : vars) {
    auto ia = a.find(v);
    auto ib = b.find(v);
    if (ia == a.end() || ib == b.end())
      throw IndexError("neighborhood check on unbound variable " + to_string(v));
    if (!backend.near(ia->second, ib->second, tol)) return false;
  }
  return true;
}

}  // namespace expderiv
