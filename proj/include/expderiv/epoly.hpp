#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <utility>
#include <vector>

#include "expderiv/errors.hpp"
#include "expderiv/ordinal.hpp"
#include "expderiv/poly.hpp"

namespace expderiv {

// Exponential polynomial: an element of the free E-ring over Q in finitely
// many variables, stored flattened as a group ring. A value is
//
//   base + sum_a coeff_a * E(a)
//
// where base and every coeff_a are ordinary polynomials and each exponent a
// is itself an EPoly in normal form with zero scalar constant. E(a)E(b)
// multiplies to E(a+b), so this one map is the whole tower. Exponent entries
// stay sorted under compare_canonical and coefficients are never zero;
// equal values therefore have identical representations, and operator== is
// plain structural comparison.
class EPoly {
 public:
  using ExpPtr = std::shared_ptr<const EPoly>;
  struct ExpTerm {
    ExpPtr exponent;  // normal form, scalar_const() == 0, never the zero EPoly
    Poly coeff;       // nonzero
  };

  EPoly() = default;

  static EPoly zero() { return {}; }
  static EPoly one() { return constant(1); }
  static EPoly constant(const Rational& r);
  static EPoly var(const VarId& v);
  static EPoly from_poly(Poly p);

  bool is_zero() const { return base_.is_zero() && expo_.empty(); }
  bool is_poly() const { return expo_.empty(); }
  const Poly& base() const { return base_; }
  const std::vector<ExpTerm>& exp_terms() const { return expo_; }

  Rational scalar_const() const { return base_.constant_term(); }

  // Height of the tower: 0 on Q[vars], and 1 + max exponent height
  // otherwise. Maintained at construction, so this is O(1).
  std::uint32_t height() const { return height_; }

  EPoly operator+(const EPoly& o) const;
  EPoly operator-() const;
  EPoly operator-(const EPoly& o) const;
  EPoly operator*(const EPoly& o) const;
  EPoly scaled(const Rational& c) const;
  EPoly pow(std::uint32_t e) const;

  bool operator==(const EPoly& o) const;

  void collect_vars(std::set<VarId>& out) const;
  std::set<VarId> vars() const;

 private:
  friend class EPolyBuilder;
  Poly base_;
  std::vector<ExpTerm> expo_;
  std::uint32_t height_ = 0;
};

// Accumulates terms and emits a normal-form EPoly. All arithmetic routes
// through here so the sortedness/nonzero invariants live in one place.
class EPolyBuilder {
 public:
  void add_base(const Poly& p);
  // exponent must be in normal form with zero scalar constant; the zero
  // exponent routes to the base part.
  void add_term(const EPoly::ExpPtr& exponent, const Poly& coeff);
  void add(const EPoly& p);
  void add_scaled(const EPoly& p, const Poly& factor);
  EPoly build();

 private:
  struct ExpLess {
    bool operator()(const EPoly::ExpPtr& a, const EPoly::ExpPtr& b) const;
  };
  Poly base_;
  std::map<EPoly::ExpPtr, Poly, ExpLess> acc_;
};

// E(p). The only rational with a defined exponential is 0, so p must have
// scalar_const() == 0; DomainError otherwise.
EPoly exp_apply(const EPoly& p);

// Total order fixing all deterministic choices in the library: height
// first, then number of (exponent, coefficient) entries, then the entries
// lexicographically (exponent recursively, coefficient via compare_poly).
std::strong_ordering compare_canonical(const EPoly& a, const EPoly& b);

// p as p_0 + ... + p_k along the module layers of the staged construction:
// p_0 is the polynomial part, and a term c*E(a) with a != 0 sits at index
// height(a) + 1. Always height(p) + 1 entries.
std::vector<EPoly> layer_decompose(const EPoly& p);

// rk of a layer-i component: at i = 0, total degree + 1 (or 0 for the zero
// polynomial); at i > 0, the number of distinct layer-(i-1) parts among the
// exponents, i.e. the d in p_i = sum_{j=1}^{d} r_j E(a_j) with distinct a_j
// from layer i-1 and coefficients r_j of height < i (lower layer parts of
// an exponent are absorbed into the coefficient via E(a) = E(a_low)E(a_top)).
// ShapeError if some term of p_i belongs to a different layer.
std::uint64_t rank_component(const EPoly& p_i, std::size_t i);

// ord(p) = sum_i w^i * rk(p_i) over the layer decomposition; ord(0) = 0.
OrdinalCNF ord(const EPoly& p);

// For nonzero p whose polynomial part vanishes: q is the negated minimal
// exponent (under compare_canonical) of the lowest nonzero layer, and the
// returned pair is (q, E(q) * p); ord(E(q) * p) < ord(p) always.
// PreconditionError if p is zero or has a nonzero polynomial part.
std::pair<EPoly, EPoly> ord_reduce(const EPoly& p);

// Simultaneous homomorphic substitution; unbound variables stay fixed.
// DomainError if an E-argument acquires a nonzero scalar constant.
EPoly substitute(const EPoly& p, const std::map<VarId, EPoly>& bindings);

}  // namespace expderiv
