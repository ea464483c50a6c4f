#include "expderiv/epoly.hpp"

#include <algorithm>

namespace expderiv {

namespace {

const EPoly& zero_ref() {
  static const EPoly z;
  return z;
}

EPoly::ExpPtr make_exp(EPoly e) { return std::make_shared<const EPoly>(std::move(e)); }

// Layer index of a term with the given exponent: 0 for the base part,
// height(a) + 1 for a term c*E(a) with a != 0.
std::size_t term_layer(const EPoly::ExpPtr& exponent) { return exponent->height() + 1; }

}  // namespace

EPoly EPoly::constant(const Rational& r) { return from_poly(Poly::constant(r)); }

EPoly EPoly::var(const VarId& v) { return from_poly(Poly::var(v)); }

EPoly EPoly::from_poly(Poly p) {
  EPoly r;
  r.base_ = std::move(p);
  return r;
}

bool EPolyBuilder::ExpLess::operator()(const EPoly::ExpPtr& a, const EPoly::ExpPtr& b) const {
  return compare_canonical(*a, *b) < 0;
}

void EPolyBuilder::add_base(const Poly& p) { base_ = base_ + p; }

void EPolyBuilder::add_term(const EPoly::ExpPtr& exponent, const Poly& coeff) {
  if (coeff.is_zero()) return;
  if (exponent->is_zero()) {
    add_base(coeff);
    return;
  }
  auto [it, inserted] = acc_.emplace(exponent, coeff);
  if (!inserted) {
    it->second = it->second + coeff;
    if (it->second.is_zero()) acc_.erase(it);
  }
}

void EPolyBuilder::add(const EPoly& p) {
  add_base(p.base());
  for (const auto& t : p.exp_terms()) add_term(t.exponent, t.coeff);
}

void EPolyBuilder::add_scaled(const EPoly& p, const Poly& factor) {
  if (factor.is_zero()) return;
  add_base(p.base() * factor);
  for (const auto& t : p.exp_terms()) add_term(t.exponent, t.coeff * factor);
}

EPoly EPolyBuilder::build() {
  EPoly r;
  r.base_ = std::move(base_);
  r.expo_.reserve(acc_.size());
  std::uint32_t h = 0;
  for (auto& [e, c] : acc_) {
    h = std::max(h, e->height() + 1);
    r.expo_.push_back({e, std::move(c)});
  }
  r.height_ = h;
  base_ = Poly::zero();
  acc_.clear();
  return r;
}

EPoly EPoly::operator+(const EPoly& o) const {
  EPolyBuilder b;
  b.add(*this);
  b.add(o);
  return b.build();
}

EPoly EPoly::operator-() const { return scaled(-1); }

EPoly EPoly::operator-(const EPoly& o) const {
  EPolyBuilder b;
  b.add(*this);
  b.add_scaled(o, Poly::constant(-1));
  return b.build();
}

EPoly EPoly::operator*(const EPoly& o) const {
  EPolyBuilder b;
  b.add_base(base_ * o.base_);
  for (const auto& t : o.expo_) b.add_term(t.exponent, base_ * t.coeff);
  for (const auto& s : expo_) {
    b.add_term(s.exponent, s.coeff * o.base_);
    for (const auto& t : o.expo_) {
      // E(a) * E(b) = E(a + b)
      b.add_term(make_exp(*s.exponent + *t.exponent), s.coeff * t.coeff);
    }
  }
  return b.build();
}

EPoly EPoly::scaled(const Rational& c) const {
  if (c == 0) return {};
  EPoly r;
  r.base_ = base_.scaled(c);
  r.expo_.reserve(expo_.size());
  for (const auto& t : expo_) r.expo_.push_back({t.exponent, t.coeff.scaled(c)});
  r.height_ = height_;
  return r;
}

EPoly EPoly::pow(std::uint32_t e) const {
  EPoly r = one();
  for (std::uint32_t i = 0; i < e; ++i) r = r * *this;
  return r;
}

bool EPoly::operator==(const EPoly& o) const {
  if (height_ != o.height_ || expo_.size() != o.expo_.size() || !(base_ == o.base_)) return false;
  for (std::size_t i = 0; i < expo_.size(); ++i) {
    if (!(expo_[i].coeff == o.expo_[i].coeff)) return false;
    if (!(*expo_[i].exponent == *o.expo_[i].exponent)) return false;
  }
  return true;
}

void EPoly::collect_vars(std::set<VarId>& out) const {
  base_.collect_vars(out);
  for (const auto& t : expo_) {
    t.exponent->collect_vars(out);
    t.coeff.collect_vars(out);
  }
}

std::set<VarId> EPoly::vars() const {
  std::set<VarId> out;
  collect_vars(out);
  return out;
}

EPoly exp_apply(const EPoly& p) {
  if (p.scalar_const() != 0) {
    throw DomainError("E undefined: argument has nonzero scalar constant " + rat_to_string(p.scalar_const()));
  }
  if (p.is_zero()) return EPoly::one();
  EPolyBuilder b;
  b.add_term(std::make_shared<const EPoly>(p), Poly::constant(1));
  return b.build();
}

std::strong_ordering compare_canonical(const EPoly& a, const EPoly& b) {
  if (a.height() != b.height()) return a.height() <=> b.height();
  std::size_t na = a.exp_terms().size() + (a.base().is_zero() ? 0 : 1);
  std::size_t nb = b.exp_terms().size() + (b.base().is_zero() ? 0 : 1);
  if (na != nb) return na <=> nb;
  // Walk the entries in exponent order, with the base part first as the
  // zero exponent.
  std::size_t ia = 0;
  std::size_t ib = 0;
  bool base_a = !a.base().is_zero();
  bool base_b = !b.base().is_zero();
  for (std::size_t step = 0; step < na; ++step) {
    const EPoly* ea;
    const Poly* ca;
    if (base_a) {
      ea = &zero_ref();
      ca = &a.base();
      base_a = false;
    } else {
      ea = a.exp_terms()[ia].exponent.get();
      ca = &a.exp_terms()[ia].coeff;
      ++ia;
    }
    const EPoly* eb;
    const Poly* cb;
    if (base_b) {
      eb = &zero_ref();
      cb = &b.base();
      base_b = false;
    } else {
      eb = b.exp_terms()[ib].exponent.get();
      cb = &b.exp_terms()[ib].coeff;
      ++ib;
    }
    if (auto c = compare_canonical(*ea, *eb); c != 0) return c;
    if (auto c = compare_poly(*ca, *cb); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::vector<EPoly> layer_decompose(const EPoly& p) {
  std::vector<EPolyBuilder> parts(p.height() + 1);
  parts[0].add_base(p.base());
  for (const auto& t : p.exp_terms()) parts[term_layer(t.exponent)].add_term(t.exponent, t.coeff);
  std::vector<EPoly> out;
  out.reserve(parts.size());
  for (auto& b : parts) out.push_back(b.build());
  return out;
}

std::uint64_t rank_component(const EPoly& p_i, std::size_t i) {
  if (i == 0) {
    if (!p_i.is_poly()) throw ShapeError("rank_component: exponential term in the layer-0 component");
    return p_i.is_zero() ? 0 : p_i.base().total_degree() + 1;
  }
  if (p_i.is_zero()) return 0;
  if (!p_i.base().is_zero()) throw ShapeError("rank_component: polynomial part in a layer-" + std::to_string(i) + " component");
  // Count distinct top-layer parts of the exponents; the rest of each
  // exponent is absorbed into the module coefficient.
  std::vector<EPoly> tops;
  for (const auto& t : p_i.exp_terms()) {
    if (term_layer(t.exponent) != i) {
      throw ShapeError("rank_component: term of layer " + std::to_string(term_layer(t.exponent)) +
                       " in a layer-" + std::to_string(i) + " component");
    }
    tops.push_back(layer_decompose(*t.exponent).back());
  }
  std::sort(tops.begin(), tops.end(), [](const EPoly& x, const EPoly& y) { return compare_canonical(x, y) < 0; });
  std::uint64_t d = 0;
  for (std::size_t k = 0; k < tops.size(); ++k) {
    if (k == 0 || !(tops[k] == tops[k - 1])) ++d;
  }
  return d;
}

OrdinalCNF ord(const EPoly& p) {
  auto layers = layer_decompose(p);
  std::vector<std::uint64_t> coeff(layers.size());
  for (std::size_t i = 0; i < layers.size(); ++i) coeff[i] = rank_component(layers[i], i);
  return OrdinalCNF::from_coeffs(std::move(coeff));
}

std::pair<EPoly, EPoly> ord_reduce(const EPoly& p) {
  if (p.is_zero()) throw PreconditionError("ord_reduce: zero input");
  if (!p.base().is_zero()) throw PreconditionError("ord_reduce: polynomial part must vanish");
  // Lowest nonzero layer = smallest exponent height among the terms.
  std::uint32_t min_h = 0;
  bool first = true;
  for (const auto& t : p.exp_terms()) {
    if (first || t.exponent->height() < min_h) min_h = t.exponent->height();
    first = false;
  }
  const EPoly* minimal = nullptr;
  for (const auto& t : p.exp_terms()) {
    if (t.exponent->height() != min_h) continue;
    if (!minimal || compare_canonical(*t.exponent, *minimal) < 0) minimal = t.exponent.get();
  }
  EPoly q = -*minimal;
  return {q, exp_apply(q) * p};
}

namespace {

EPoly substitute_poly(const Poly& p, const std::map<VarId, EPoly>& bindings) {
  EPolyBuilder b;
  for (const auto& [m, c] : p.terms) {
    EPoly term = EPoly::constant(c);
    for (const auto& [v, e] : m.exps) {
      auto it = bindings.find(v);
      const EPoly repl = it == bindings.end() ? EPoly::var(v) : it->second;
      term = term * repl.pow(e);
    }
    b.add(term);
  }
  return b.build();
}

}  // namespace

EPoly substitute(const EPoly& p, const std::map<VarId, EPoly>& bindings) {
  EPolyBuilder b;
  b.add(substitute_poly(p.base(), bindings));
  for (const auto& t : p.exp_terms()) {
    EPoly arg = substitute(*t.exponent, bindings);
    b.add(exp_apply(arg) * substitute_poly(t.coeff, bindings));
  }
  return b.build();
}

}  // namespace expderiv
