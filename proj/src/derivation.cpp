#include "expderiv/derivation.hpp"

#include <algorithm>

namespace expderiv {

EPoly partial_derivative(const EPoly& p, const VarId& v) {
  EPolyBuilder b;
  b.add_base(poly_partial(p.base(), v));
  for (const auto& t : p.exp_terms()) {
    b.add_term(t.exponent, poly_partial(t.coeff, v));
    EPoly da = partial_derivative(*t.exponent, v);
    if (!da.is_zero()) {
      EPolyBuilder term;
      term.add_term(t.exponent, t.coeff);
      b.add(da * term.build());
    }
  }
  return b.build();
}

EPoly delta_shift(const EPoly& p) { return delta_shift_over(p, p.vars()); }

EPoly delta_shift_over(const EPoly& p, const std::set<VarId>& over) {
  EPolyBuilder b;
  for (const auto& v : over) {
    EPoly dp = partial_derivative(p, v);
    if (!dp.is_zero()) b.add(dp * EPoly::var(succ(v)));
  }
  return b.build();
}

ERational::ERational(EPoly n, EPoly d) : num(std::move(n)), den(std::move(d)) {
  if (den.is_zero()) throw DomainError("ERational with zero denominator");
  if (num.is_zero()) den = EPoly::one();
}

std::vector<std::vector<EPoly>> jacobian(const std::vector<EPoly>& polys,
                                         const std::vector<VarId>& vars) {
  std::vector<std::vector<EPoly>> m(polys.size());
  for (std::size_t i = 0; i < polys.size(); ++i) {
    m[i].reserve(vars.size());
    for (const auto& v : vars) m[i].push_back(partial_derivative(polys[i], v));
  }
  return m;
}

namespace {

EPoly minor_det(const std::vector<std::vector<EPoly>>& m, std::vector<std::size_t> rows,
                std::vector<std::size_t> cols) {
  if (rows.size() == 1) return m[rows[0]][cols[0]];
  EPoly acc;
  std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const EPoly& entry = m[rows[0]][cols[k]];
    if (entry.is_zero()) continue;
    std::vector<std::size_t> sub_cols;
    sub_cols.reserve(cols.size() - 1);
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (j != k) sub_cols.push_back(cols[j]);
    }
    EPoly cof = entry * minor_det(m, sub_rows, sub_cols);
    acc = (k % 2 == 0) ? acc + cof : acc - cof;
  }
  return acc;
}

std::vector<std::size_t> iota_index(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

EPoly det_epoly(const std::vector<std::vector<EPoly>>& m) {
  if (m.empty()) return EPoly::one();
  for (const auto& row : m) {
    if (row.size() != m.size()) throw ShapeError("determinant of a non-square matrix");
  }
  return minor_det(m, iota_index(m.size()), iota_index(m.size()));
}

EPoly jacobian_det(const std::vector<EPoly>& polys, const std::vector<VarId>& vars) {
  if (polys.size() != vars.size()) throw ShapeError("Jacobian determinant needs as many polynomials as variables");
  return det_epoly(jacobian(polys, vars));
}

std::vector<std::vector<EPoly>> adjugate(const std::vector<std::vector<EPoly>>& m) {
  std::size_t n = m.size();
  for (const auto& row : m) {
    if (row.size() != n) throw ShapeError("adjugate of a non-square matrix");
  }
  std::vector<std::vector<EPoly>> adj(n, std::vector<EPoly>(n));
  if (n == 1) {
    adj[0][0] = EPoly::one();
    return adj;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // adj[i][j] = (-1)^(i+j) * minor with row j and column i removed.
      std::vector<std::size_t> rows, cols;
      for (std::size_t r = 0; r < n; ++r) {
        if (r != j) rows.push_back(r);
      }
      for (std::size_t c = 0; c < n; ++c) {
        if (c != i) cols.push_back(c);
      }
      EPoly d = minor_det(m, rows, cols);
      adj[i][j] = ((i + j) % 2 == 0) ? d : -d;
    }
  }
  return adj;
}

std::vector<std::vector<EPoly>> gradient_slice(const std::vector<EPoly>& polys,
                                               const std::vector<VarId>& vars,
                                               const std::vector<std::size_t>& indices) {
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= vars.size()) throw IndexError("gradient_slice: index out of range");
    if (k > 0 && indices[k] <= indices[k - 1]) throw IndexError("gradient_slice: indices must be strictly increasing");
  }
  std::vector<std::vector<EPoly>> m(polys.size());
  for (std::size_t i = 0; i < polys.size(); ++i) {
    m[i].reserve(indices.size());
    for (std::size_t k : indices) m[i].push_back(partial_derivative(polys[i], vars[k]));
  }
  return m;
}

KhovanskiiSystem khovanskii_build(std::vector<EPoly> polys, VarPartition vars) {
  if (polys.size() != vars.unknowns.size()) {
    throw ShapeError("Khovanskii system needs exactly one polynomial per unknown (got " +
                     std::to_string(polys.size()) + " polynomials, " +
                     std::to_string(vars.unknowns.size()) + " unknowns)");
  }
  std::set<VarId> seen;
  for (const auto& v : vars.unknowns) {
    if (!seen.insert(v).second) throw ShapeError("duplicate unknown " + to_string(v));
  }
  for (const auto& v : vars.parameters) {
    if (!seen.insert(v).second) throw ShapeError("parameter repeats an unknown: " + to_string(v));
  }
  for (const auto& f : polys) {
    for (const auto& v : f.vars()) {
      if (!seen.count(v)) throw ShapeError("undeclared variable " + to_string(v));
    }
  }
  KhovanskiiSystem sys;
  sys.jac_det = jacobian_det(polys, vars.unknowns);
  sys.polys = std::move(polys);
  sys.unknowns = std::move(vars.unknowns);
  sys.parameters = std::move(vars.parameters);
  return sys;
}

std::vector<std::vector<ERational>> propagate_symbolic(const KhovanskiiSystem& sys,
                                                       std::uint32_t levels) {
  if (sys.jac_det.is_zero()) throw SingularJacobian("symbolic Jacobian determinant is identically zero");
  std::size_t n = sys.unknowns.size();
  const EPoly& det = sys.jac_det;
  std::set<VarId> unknown_set(sys.unknowns.begin(), sys.unknowns.end());

  // Derivation that treats unknowns as implicit functions: d(u) is the
  // level-1 numerator over det, d(v) = succ(v) for everything else. Returns
  // the numerator of d(p)/det.
  auto derive_num = [&](const EPoly& p, const std::vector<EPoly>& level1_nums) {
    EPoly acc;
    for (const auto& v : p.vars()) {
      EPoly dp = partial_derivative(p, v);
      if (dp.is_zero()) continue;
      if (unknown_set.count(v)) {
        std::size_t idx = std::find(sys.unknowns.begin(), sys.unknowns.end(), v) - sys.unknowns.begin();
        acc = acc + dp * level1_nums[idx];
      } else {
        acc = acc + dp * EPoly::var(succ(v)) * det;
      }
    }
    return acc;
  };

  // Level 1 through the adjugate.
  std::vector<EPoly> fdelta;
  fdelta.reserve(n);
  for (const auto& f : sys.polys) {
    std::set<VarId> params_of_f;
    for (const auto& v : f.vars()) {
      if (!unknown_set.count(v)) params_of_f.insert(v);
    }
    fdelta.push_back(delta_shift_over(f, params_of_f));
  }
  auto adj = adjugate(jacobian(sys.polys, sys.unknowns));
  std::vector<EPoly> level1(n);
  for (std::size_t i = 0; i < n; ++i) {
    EPoly acc;
    for (std::size_t j = 0; j < n; ++j) acc = acc + adj[i][j] * fdelta[j];
    level1[i] = -acc;
  }

  std::vector<std::vector<ERational>> out;
  out.reserve(levels);
  std::vector<EPoly> nums = level1;
  std::uint64_t den_pow = 1;
  auto emit = [&]() {
    std::vector<ERational> row;
    row.reserve(n);
    for (const auto& nm : nums) row.emplace_back(nm, det.pow(static_cast<std::uint32_t>(den_pow)));
    out.push_back(std::move(row));
  };
  if (levels >= 1) emit();
  EPoly det_deriv_num;  // numerator of d(det)/det, computed on demand
  bool det_deriv_ready = false;
  for (std::uint32_t k = 2; k <= levels; ++k) {
    if (!det_deriv_ready) {
      det_deriv_num = derive_num(det, level1);
      det_deriv_ready = true;
    }
    std::vector<EPoly> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      // d(n / det^e) = (d(n) det - e n d(det)) / det^(e+2)
      EPoly n1 = derive_num(nums[i], level1);
      next[i] = n1 * det - nums[i].scaled(Rational(den_pow)) * det_deriv_num;
    }
    nums = std::move(next);
    den_pow += 2;
    emit();
  }
  return out;
}

}  // namespace expderiv
