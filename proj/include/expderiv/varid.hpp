#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace expderiv {

// A variable together with how many times the derivation has been applied
// to it. (x, 0) is the variable itself, (x, 1) stands for delta(x), and so
// on. Textual form: "x" for order 0, "x_d2" for (x, 2); the _d<k> suffix is
// reserved and user identifiers must not end in it.
struct VarId {
  std::string base;
  std::uint32_t order = 0;

  auto operator<=>(const VarId&) const = default;
};

inline VarId succ(VarId v) {
  ++v.order;
  return v;
}

std::string to_string(const VarId& v);

// Splits a raw identifier into (base, order), decoding a trailing _d<k>.
VarId decode_varid(const std::string& ident);

}  // namespace expderiv
