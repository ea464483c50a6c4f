#include "expderiv/varid.hpp"

#include <cctype>

namespace expderiv {

std::string to_string(const VarId& v) {
  if (v.order == 0) return v.base;
  return v.base + "_d" + std::to_string(v.order);
}

VarId decode_varid(const std::string& ident) {
  // Look for a trailing _d<digits> with at least one digit.
  auto pos = ident.rfind("_d");
  if (pos == std::string::npos || pos == 0 || pos + 2 >= ident.size()) return {ident, 0};
  for (std::size_t i = pos + 2; i < ident.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(ident[i]))) return {ident, 0};
  }
  std::uint32_t order = static_cast<std::uint32_t>(std::stoul(ident.substr(pos + 2)));
  return {ident.substr(0, pos), order};
}

}  // namespace expderiv
