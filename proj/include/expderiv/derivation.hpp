#pragma once

#include <set>
#include <vector>

#include "expderiv/epoly.hpp"

namespace expderiv {

// d/dv as an E-derivation: trivial on Q, v itself maps to 1, other
// variables to 0, and E(a) to (d/dv a) * E(a).
EPoly partial_derivative(const EPoly& p, const VarId& v);

// The universal derivation on coordinates: sum over every variable v
// occurring in p of (d/dv p) * succ(v), where succ((x, j)) = (x, j + 1).
// Coefficients are rational, so there is no extra constant part.
EPoly delta_shift(const EPoly& p);

// Same sum restricted to the given variables; delta_shift(p) equals
// delta_shift_over(p, p.vars()).
EPoly delta_shift_over(const EPoly& p, const std::set<VarId>& over);

// Quotient of exponential polynomials. Denominators are kept exactly as
// produced (no gcd cancellation), because downstream code relies on their
// structure: everything propagation emits has a power of a Jacobian
// determinant here.
struct ERational {
  EPoly num;
  EPoly den;

  ERational() : num(), den(EPoly::one()) {}
  ERational(EPoly n, EPoly d);

  bool operator==(const ERational& o) const { return num == o.num && den == o.den; }
};

// Ordered unknowns and parameters; disjoint, no repeats.
struct VarPartition {
  std::vector<VarId> unknowns;
  std::vector<VarId> parameters;
};

// Matrix of partial derivatives, rows = polynomials, columns = variables.
std::vector<std::vector<EPoly>> jacobian(const std::vector<EPoly>& polys,
                                         const std::vector<VarId>& vars);

// Exact determinant by cofactor expansion; ShapeError if non-square.
EPoly det_epoly(const std::vector<std::vector<EPoly>>& m);
EPoly jacobian_det(const std::vector<EPoly>& polys, const std::vector<VarId>& vars);

// Adjugate (transposed cofactors), so m * adj = det * I exactly.
std::vector<std::vector<EPoly>> adjugate(const std::vector<std::vector<EPoly>>& m);

// Columns of the Jacobian selected by a strictly increasing index tuple
// (0-based into vars); IndexError on a bad tuple.
std::vector<std::vector<EPoly>> gradient_slice(const std::vector<EPoly>& polys,
                                               const std::vector<VarId>& vars,
                                               const std::vector<std::size_t>& indices);

// Square system H_f(x) : f_i(x) = 0 for all i, det(Jac) != 0, with
// distinguished unknowns and parameters. jac_det is cached at build time.
struct KhovanskiiSystem {
  std::vector<EPoly> polys;
  std::vector<VarId> unknowns;
  std::vector<VarId> parameters;
  EPoly jac_det;
};

// ShapeError unless |polys| == |unknowns|, the partition is disjoint and
// duplicate-free, and every variable of the system is declared.
KhovanskiiSystem khovanskii_build(std::vector<EPoly> polys, VarPartition vars);

// Exact jets of the implicit solution: result[k-1][i] is the symbolic
// k-th derivative of unknown i as a function of the unknowns, the
// parameters and their derivative coordinates. Level 1 solves the
// linearized system through the adjugate,
//
//   (t_1, ..., t_n)^T = -adj(J) * (f_1^d, ..., f_n^d)^T / det(J),
//
// where f^d collects the parameter part of delta_shift(f); level k+1
// applies the derivation to level k, replacing the derivative of each
// unknown by its level-1 value and bumping parameter coordinates. Every
// denominator is a power of jac_det (a zero numerator normalizes to
// denominator 1 = det^0). SingularJacobian if jac_det is structurally zero.
std::vector<std::vector<ERational>> propagate_symbolic(const KhovanskiiSystem& sys,
                                                       std::uint32_t levels);

}  // namespace expderiv
