#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>

#include "expderiv/rational.hpp"
#include "expderiv/varid.hpp"

namespace expderiv {

// Power product of variables with positive exponents; the empty map is 1.
struct Monomial {
  std::map<VarId, std::uint32_t> exps;

  static Monomial one() { return {}; }
  static Monomial var(const VarId& v, std::uint32_t e = 1);

  bool is_one() const { return exps.empty(); }
  std::uint64_t total_degree() const;

  Monomial operator*(const Monomial& o) const;
  auto operator<=>(const Monomial&) const = default;
};

// Sparse multivariate polynomial over Q. Zero coefficients never appear in
// the map, so the zero polynomial is the empty map and equality is
// structural.
struct Poly {
  std::map<Monomial, Rational> terms;

  static Poly zero() { return {}; }
  static Poly constant(const Rational& r);
  static Poly var(const VarId& v);

  bool is_zero() const { return terms.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  std::uint64_t total_degree() const;  // 0 for the zero polynomial

  void add_term(const Monomial& m, const Rational& c);

  Poly operator+(const Poly& o) const;
  Poly operator-() const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly scaled(const Rational& c) const;

  bool operator==(const Poly& o) const { return terms == o.terms; }

  void collect_vars(std::set<VarId>& out) const;
};

// Total order used wherever a deterministic arrangement of polynomials is
// needed: term count first, then (monomial, coefficient) pairs
// lexicographically in monomial order.
std::strong_ordering compare_poly(const Poly& a, const Poly& b);

// d/dv, treating all other variables as constants.
Poly poly_partial(const Poly& p, const VarId& v);

}  // namespace expderiv
