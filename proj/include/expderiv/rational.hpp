#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace expderiv {

// Exact arithmetic everywhere in the symbolic layer. cpp_rational keeps
// fractions reduced with positive denominator, which is exactly the normal
// form the rest of the library assumes.
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline std::string rat_to_string(const Rational& r) {
  std::string s = rat_num(r).str();
  if (rat_den(r) != 1) s += "/" + rat_den(r).str();
  return s;
}

inline double rat_to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace expderiv
