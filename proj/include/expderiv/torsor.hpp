#pragma once

#include <vector>

#include "expderiv/solve.hpp"

namespace expderiv {

// Residual of a candidate tangent vector over a point of the system:
// the shifted system evaluated with every first-order slot filled from
// `tangent` (keyed by the base variables). A tangent belongs to the fiber
// over the point exactly when all residuals vanish.
template <class B, class S = typename B::Scalar>
std::vector<S> torsor_residual(const B& backend, const std::vector<EPoly>& polys,
                               const Point<S>& pt, const Point<S>& tangent) {
  Point<S> ext = pt;
  for (const auto& [v, b] : tangent) ext[succ(v)] = b;
  std::vector<S> out;
  out.reserve(polys.size());
  for (const auto& f : polys) out.push_back(eval_epoly(backend, delta_shift(f), ext));
  return out;
}

// Complete a partial tangent: given first-order values for every variable
// except the dependents, solve the (linear) shifted system for the
// dependents' first-order values. Returns the tangent entries keyed by the
// dependent base variables.
template <class B, class S = typename B::Scalar>
Point<S> solve_dependent_tangent(const B& backend, const std::vector<EPoly>& polys,
                                 const std::vector<VarId>& dependents,
                                 const Point<S>& pt, const Point<S>& given_tangent) {
  if (polys.size() != dependents.size())
    throw ShapeError("dependent tangent completion requires a square system");
  Point<S> ext = pt;
  for (const auto& [v, b] : given_tangent) ext[succ(v)] = b;
  for (const auto& d : dependents) ext[succ(d)] = backend.zero();
  std::vector<S> rhs;
  rhs.reserve(polys.size());
  for (const auto& f : polys) rhs.push_back(-eval_epoly(backend, delta_shift(f), ext));
  Mat<S> J = eval_gradient_matrix(backend, polys, dependents, pt);
  std::vector<S> b = linear_solve(backend, J, rhs);
  Point<S> out;
  for (std::size_t j = 0; j < dependents.size(); ++j) out[dependents[j]] = b[j];
  return out;
}

}  // namespace expderiv
