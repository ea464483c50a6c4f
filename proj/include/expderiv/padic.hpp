#pragma once

#include <string>

#include "expderiv/errors.hpp"
#include "expderiv/rational.hpp"

namespace expderiv {

// Truncated p-adic number with tracked valuation: p^val * unit, where unit
// is a p-adic unit known modulo p^prec. Relative precision shrinks under
// mixed-precision arithmetic and never grows, so division by p^w shifts the
// valuation instead of silently corrupting digits (the conservative slack
// accounting this backend promises). A value whose unit digits have all
// cancelled is only known to be O(p^val); is_zeroish() reports that state,
// and exact zeros carry an effectively infinite valuation bound.
class Padic {
 public:
  Padic() = default;

  static Padic zero(long long p);
  static Padic from_rational(const Rational& r, long long p, int prec);
  // p^val * u, normalized (factors of p move from u into val, u reduced
  // modulo p^prec). u == 0 gives O(p^val).
  static Padic from_parts(long long p, int prec, long long val, Int u);

  long long prime() const { return p_; }
  int rel_prec() const { return prec_; }
  bool is_zeroish() const { return unit_ == 0; }
  // For a unit-bearing value, the exact valuation; for a zeroish value, the
  // absolute precision up to which it is indistinguishable from 0.
  long long valuation() const { return val_; }
  const Int& unit() const { return unit_; }
  // min(valuation, cap), the defensible lower bound used by checks.
  long long known_valuation(long long cap) const { return val_ < cap ? val_ : cap; }

  Padic operator+(const Padic& o) const;
  Padic operator-() const;
  Padic operator-(const Padic& o) const;
  Padic operator*(const Padic& o) const;
  Padic operator/(const Padic& o) const;  // DomainError when o is zeroish
  Padic pow(std::uint32_t e) const;

  // Drops information below p^abs_prec.
  Padic truncated_abs(long long abs_prec) const;

  // The canonical residue p^val * unit mod p^N for val >= 0 (DomainError on
  // negative valuation), as used by the fixed-modulus view of this backend.
  Int residue_mod(int N) const;

  std::string to_string() const;

 private:
  long long p_ = 0;
  int prec_ = 0;
  long long val_ = 0;
  Int unit_ = 0;  // 0, or a unit in [1, p^prec) coprime to p
};

// sum_k floor(i / p^k), the p-valuation of i!.
long long factorial_valuation(long long i, long long p);

// exp(x) = sum x^i / i!, truncated once every remaining term has valuation
// at least target_prec. Requires v(x) >= 1 for p > 2 and v(x) >= 2 for
// p = 2 (DomainError otherwise); the result is a unit congruent to 1 mod p.
Padic exp_padic(const Padic& x, int target_prec);

}  // namespace expderiv
