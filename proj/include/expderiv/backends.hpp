#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "expderiv/epoly.hpp"
#include "expderiv/errors.hpp"
#include "expderiv/padic.hpp"
#include "expderiv/rational.hpp"
#include "expderiv/varid.hpp"

namespace expderiv {

// Variable assignment. Jet values live here too, keyed by (base, order).
template <class S>
using Point = std::map<VarId, S>;

// Every threshold a numeric check may consult, so none is ever hard-coded
// at a call site. The first three drive the real backend, the last three
// the p-adic one (valuations: residuals must sit at least this high, a
// certifying determinant at most this high, neighborhoods agree to at
// least this depth).
struct ToleranceSpec {
  double eps_res = 1e-10;
  double eps_reg = 1e-8;
  double radius = 1e-2;
  long long res_min_val = 8;
  long long reg_max_val = 0;
  long long nbhd_min_val = 2;
};

template <class S>
struct Mat {
  std::size_t rows = 0, cols = 0;
  std::vector<S> a;
  Mat() = default;
  Mat(std::size_t r, std::size_t c, const S& fill) : rows(r), cols(c), a(r * c, fill) {}
  S& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const S& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

struct RealBackend {
  using Scalar = double;

  Scalar zero() const { return 0.0; }
  Scalar from_rational(const Rational& r) const { return rat_to_double(r); }
  Scalar exp_value(Scalar x) const {
    double e = std::exp(x);
    if (!std::isfinite(e)) throw OverflowError("exp overflow in real evaluation");
    return e;
  }
  void check(Scalar x) const {
    if (!std::isfinite(x)) throw OverflowError("non-finite value in real evaluation");
  }
  bool residual_ok(Scalar r, const ToleranceSpec& tol) const { return std::abs(r) <= tol.eps_res; }
  bool det_regular(Scalar d, const ToleranceSpec& tol) const { return std::abs(d) >= tol.eps_reg; }
  bool near(Scalar a, Scalar b, const ToleranceSpec& tol) const {
    return std::abs(a - b) <= tol.radius;
  }
  bool is_exactly_zero(Scalar x) const { return x == 0.0; }
  std::string to_string(Scalar x) const;
};

struct PadicBackend {
  long long p = 2;
  int prec = 12;

  using Scalar = Padic;

  Scalar zero() const { return Padic::zero(p); }
  Scalar from_rational(const Rational& r) const { return Padic::from_rational(r, p, prec); }
  Scalar exp_value(const Scalar& x) const { return exp_padic(x, prec); }
  void check(const Scalar&) const {}
  bool residual_ok(const Scalar& r, const ToleranceSpec& tol) const {
    return r.known_valuation(prec) >= tol.res_min_val;
  }
  bool det_regular(const Scalar& d, const ToleranceSpec& tol) const {
    return !d.is_zeroish() && d.valuation() <= tol.reg_max_val;
  }
  bool near(const Scalar& a, const Scalar& b, const ToleranceSpec& tol) const {
    return (a - b).known_valuation(prec) >= tol.nbhd_min_val;
  }
  bool is_exactly_zero(const Scalar& x) const {
    return x.is_zeroish() && x.valuation() >= prec;
  }
  std::string to_string(const Scalar& x) const { return x.to_string(); }
};

// Square solve (SingularJacobian when no usable pivot), determinant, full
// row rank at tolerance, and a rectangular solve for consistent systems
// (least squares on the real side; on the p-adic side pivoted elimination
// with free columns at zero, the caller re-verifying residuals).
std::vector<double> linear_solve(const RealBackend&, const Mat<double>& A,
                                 const std::vector<double>& rhs);
std::vector<Padic> linear_solve(const PadicBackend&, const Mat<Padic>& A,
                                const std::vector<Padic>& rhs);
double mat_det(const RealBackend&, const Mat<double>& A);
Padic mat_det(const PadicBackend&, const Mat<Padic>& A);
bool full_row_rank(const RealBackend&, const Mat<double>& A, const ToleranceSpec& tol);
bool full_row_rank(const PadicBackend&, const Mat<Padic>& A, const ToleranceSpec& tol);
std::vector<double> consistent_solve(const RealBackend&, const Mat<double>& A,
                                     const std::vector<double>& rhs);
std::vector<Padic> consistent_solve(const PadicBackend&, const Mat<Padic>& A,
                                    const std::vector<Padic>& rhs);

template <class B, class S = typename B::Scalar>
S scalar_pow(const B& backend, S base, std::uint32_t e) {
  S acc = backend.from_rational(Rational(1));
  while (e > 0) {
    if (e & 1u) acc = acc * base;
    base = base * base;
    e >>= 1u;
  }
  return acc;
}

template <class B, class S = typename B::Scalar>
S eval_poly(const B& backend, const Poly& p, const Point<S>& pt) {
  S acc = backend.zero();
  for (const auto& [mon, coeff] : p.terms) {
    S term = backend.from_rational(coeff);
    for (const auto& [var, e] : mon.exps) {
      auto it = pt.find(var);
      if (it == pt.end()) throw IndexError("unbound variable " + to_string(var));
      term = term * scalar_pow(backend, it->second, e);
    }
    acc = acc + term;
  }
  return acc;
}

template <class B, class S = typename B::Scalar>
S eval_epoly(const B& backend, const EPoly& p, const Point<S>& pt) {
  S acc = eval_poly(backend, p.base(), pt);
  for (const auto& t : p.exp_terms()) {
    S arg = eval_epoly(backend, *t.exponent, pt);
    acc = acc + eval_poly(backend, t.coeff, pt) * backend.exp_value(arg);
  }
  backend.check(acc);
  return acc;
}

}  // namespace expderiv
