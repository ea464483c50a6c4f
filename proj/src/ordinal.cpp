#include "expderiv/ordinal.hpp"

namespace expderiv {

OrdinalCNF OrdinalCNF::from_coeffs(std::vector<std::uint64_t> c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
  return {std::move(c)};
}

std::strong_ordering operator<=>(const OrdinalCNF& a, const OrdinalCNF& b) {
  if (a.coeff.size() != b.coeff.size()) return a.coeff.size() <=> b.coeff.size();
  for (std::size_t i = a.coeff.size(); i-- > 0;) {
    if (a.coeff[i] != b.coeff[i]) return a.coeff[i] <=> b.coeff[i];
  }
  return std::strong_ordering::equal;
}

std::string to_string(const OrdinalCNF& o) {
  if (o.is_zero()) return "0";
  std::string out;
  for (std::size_t i = o.coeff.size(); i-- > 0;) {
    if (o.coeff[i] == 0) continue;
    if (!out.empty()) out += "+";
    if (i == 0) {
      out += std::to_string(o.coeff[i]);
    } else if (i == 1) {
      out += "w*" + std::to_string(o.coeff[i]);
    } else {
      out += "w^" + std::to_string(i) + "*" + std::to_string(o.coeff[i]);
    }
  }
  return out;
}

}  // namespace expderiv
