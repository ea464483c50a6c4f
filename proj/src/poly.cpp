#include "expderiv/poly.hpp"

#include <algorithm>

namespace expderiv {

Monomial Monomial::var(const VarId& v, std::uint32_t e) {
  Monomial m;
  if (e > 0) m.exps[v] = e;
  return m;
}

std::uint64_t Monomial::total_degree() const {
  std::uint64_t d = 0;
  for (const auto& [v, e] : exps) d += e;
  return d;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r = *this;
  for (const auto& [v, e] : o.exps) r.exps[v] += e;
  return r;
}

Poly Poly::constant(const Rational& r) {
  Poly p;
  if (r != 0) p.terms[Monomial::one()] = r;
  return p;
}

Poly Poly::var(const VarId& v) {
  Poly p;
  p.terms[Monomial::var(v)] = 1;
  return p;
}

bool Poly::is_constant() const {
  return terms.empty() || (terms.size() == 1 && terms.begin()->first.is_one());
}

Rational Poly::constant_term() const {
  auto it = terms.find(Monomial::one());
  return it == terms.end() ? Rational(0) : it->second;
}

std::uint64_t Poly::total_degree() const {
  std::uint64_t d = 0;
  for (const auto& [m, c] : terms) d = std::max(d, m.total_degree());
  return d;
}

void Poly::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  }
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  for (const auto& [m, c] : o.terms) r.add_term(m, c);
  return r;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& [m, c] : r.terms) c = -c;
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  Poly r = *this;
  for (const auto& [m, c] : o.terms) r.add_term(m, -c);
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  for (const auto& [m1, c1] : terms) {
    for (const auto& [m2, c2] : o.terms) r.add_term(m1 * m2, c1 * c2);
  }
  return r;
}

Poly Poly::scaled(const Rational& c) const {
  Poly r;
  if (c == 0) return r;
  for (const auto& [m, k] : terms) r.terms[m] = k * c;
  return r;
}

void Poly::collect_vars(std::set<VarId>& out) const {
  for (const auto& [m, c] : terms) {
    for (const auto& [v, e] : m.exps) out.insert(v);
  }
}

std::strong_ordering compare_poly(const Poly& a, const Poly& b) {
  if (a.terms.size() != b.terms.size()) return a.terms.size() <=> b.terms.size();
  auto ia = a.terms.begin();
  auto ib = b.terms.begin();
  for (; ia != a.terms.end(); ++ia, ++ib) {
    if (auto c = ia->first <=> ib->first; c != 0) return c;
    if (ia->second != ib->second) return ia->second < ib->second ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

Poly poly_partial(const Poly& p, const VarId& v) {
  Poly r;
  for (const auto& [m, c] : p.terms) {
    auto it = m.exps.find(v);
    if (it == m.exps.end()) continue;
    Monomial dm = m;
    if (it->second == 1) {
      dm.exps.erase(v);
    } else {
      dm.exps[v] = it->second - 1;
    }
    r.add_term(dm, c * it->second);
  }
  return r;
}

}  // namespace expderiv
