#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace expderiv {

// Ordinal below w^w in Cantor normal form: coeff[i] multiplies w^i. The
// highest entry is nonzero; the empty vector is the ordinal 0. Comparison is
// by degree first, then coefficients from the highest power down.
struct OrdinalCNF {
  std::vector<std::uint64_t> coeff;

  static OrdinalCNF from_coeffs(std::vector<std::uint64_t> c);

  bool is_zero() const { return coeff.empty(); }

  friend std::strong_ordering operator<=>(const OrdinalCNF& a, const OrdinalCNF& b);
  friend bool operator==(const OrdinalCNF& a, const OrdinalCNF& b) { return a.coeff == b.coeff; }
};

// "w^2*1+w*3+2" style; zero coefficients are omitted and the zero ordinal
// prints as "0".
std::string to_string(const OrdinalCNF& o);

}  // namespace expderiv
