#include "expderiv/term.hpp"

#include <cctype>

namespace expderiv {

namespace {

TermPtr make(Term t) { return std::make_shared<const Term>(std::move(t)); }

}  // namespace

TermPtr t_rat(const Rational& r) {
  if (r < 0) return t_neg(t_rat(-r));
  Term t;
  t.kind = Term::Kind::Rational;
  t.value = r;
  return make(std::move(t));
}

TermPtr t_var(const VarId& v) {
  Term t;
  t.kind = Term::Kind::Variable;
  t.var = v;
  return make(std::move(t));
}

TermPtr t_add(TermPtr a, TermPtr b) {
  Term t;
  t.kind = Term::Kind::Add;
  t.a = std::move(a);
  t.b = std::move(b);
  return make(std::move(t));
}

TermPtr t_neg(TermPtr a) {
  Term t;
  t.kind = Term::Kind::Neg;
  t.a = std::move(a);
  return make(std::move(t));
}

TermPtr t_sub(TermPtr a, TermPtr b) { return t_add(std::move(a), t_neg(std::move(b))); }

TermPtr t_mul(TermPtr a, TermPtr b) {
  Term t;
  t.kind = Term::Kind::Mul;
  t.a = std::move(a);
  t.b = std::move(b);
  return make(std::move(t));
}

TermPtr t_pow(TermPtr a, std::uint32_t k) {
  Term t;
  t.kind = Term::Kind::IntPow;
  t.a = std::move(a);
  t.power = k;
  return make(std::move(t));
}

TermPtr t_exp(TermPtr a) {
  Term t;
  t.kind = Term::Kind::Exp;
  t.a = std::move(a);
  return make(std::move(t));
}

TermPtr t_der(TermPtr a) {
  Term t;
  t.kind = Term::Kind::Der;
  t.a = std::move(a);
  return make(std::move(t));
}

TermPtr t_inv(TermPtr a) {
  Term t;
  t.kind = Term::Kind::Inv;
  t.a = std::move(a);
  return make(std::move(t));
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Term::Kind::Rational:
      return a->value == b->value;
    case Term::Kind::Variable:
      return a->var == b->var;
    case Term::Kind::Add:
    case Term::Kind::Mul:
      return term_equal(a->a, b->a) && term_equal(a->b, b->b);
    case Term::Kind::IntPow:
      return a->power == b->power && term_equal(a->a, b->a);
    case Term::Kind::Neg:
    case Term::Kind::Exp:
    case Term::Kind::Der:
    case Term::Kind::Inv:
      return term_equal(a->a, b->a);
  }
  return false;
}

namespace {

struct Parser {
  const std::string& s;
  std::size_t i = 0;

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }

  bool at_end() {
    skip_ws();
    return i >= s.size();
  }

  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }

  bool take(char c) {
    if (peek() == c) {
      ++i;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!take(c)) throw SyntaxError(std::string("expected '") + c + "' " + what, i);
  }

  Int digits() {
    skip_ws();
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start) throw SyntaxError("expected a number", i);
    return Int(s.substr(start, i - start));
  }

  Rational rational_literal() {
    Int num = digits();
    if (peek() == '/') {
      ++i;
      std::size_t den_pos = i;
      Int den = digits();
      if (den == 0) throw SyntaxError("zero denominator in literal", den_pos);
      return Rational(num, den);
    }
    return Rational(num);
  }

  std::uint32_t nat_exponent() {
    std::size_t pos = i;
    Int n = digits();
    if (n > 1000000) throw SyntaxError("exponent too large", pos);
    return n.convert_to<std::uint32_t>();
  }

  std::string ident() {
    skip_ws();
    std::size_t start = i;
    if (i >= s.size() || !(std::isalpha(static_cast<unsigned char>(s[i])))) {
      throw SyntaxError("expected an identifier", i);
    }
    ++i;
    while (i < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) {
      ++i;
    }
    return s.substr(start, i - start);
  }

  TermPtr sum() {
    TermPtr t = prod();
    while (true) {
      if (take('+')) {
        t = t_add(t, prod());
      } else if (take('-')) {
        t = t_add(t, t_neg(prod()));
      } else {
        return t;
      }
    }
  }

  TermPtr prod() {
    TermPtr t = unary();
    while (take('*')) t = t_mul(t, unary());
    return t;
  }

  TermPtr unary() {
    if (take('-')) return t_neg(unary());
    TermPtr t = atom();
    if (take('^')) return t_pow(t, nat_exponent());
    return t;
  }

  TermPtr call(TermPtr (*ctor)(TermPtr), const char* name) {
    expect('(', (std::string("after ") + name).c_str());
    TermPtr arg = sum();
    expect(')', (std::string("closing ") + name).c_str());
    return ctor(std::move(arg));
  }

  TermPtr atom() {
    char c = peek();
    if (c == '(') {
      ++i;
      TermPtr t = sum();
      expect(')', "closing parenthesis");
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return t_rat(rational_literal());
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t pos = i;
      std::string name = ident();
      if (name == "E") return call(&t_exp, "E");
      if (name == "D") return call(&t_der, "D");
      if (name == "inv") return call(&t_inv, "inv");
      if (name == "_") throw SyntaxError("bad identifier", pos);
      return t_var(decode_varid(name));
    }
    throw SyntaxError("unexpected character", i);
  }
};

}  // namespace

TermPtr parse_term(const std::string& text) {
  Parser p{text};
  TermPtr t = p.sum();
  if (!p.at_end()) throw SyntaxError("trailing input", p.i);
  return t;
}

namespace {

// Precedence levels matching the grammar productions.
enum : int { kSum = 0, kProd = 1, kUnary = 2, kPow = 3, kAtom = 4 };

int level_of(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Add:
      return kSum;
    case Term::Kind::Mul:
      return kProd;
    case Term::Kind::Neg:
      return kUnary;
    case Term::Kind::IntPow:
      return kPow;
    default:
      return kAtom;
  }
}

void print_rec(const TermPtr& t, int min_level, std::string& out) {
  bool parens = level_of(*t) < min_level;
  if (parens) out += "(";
  switch (t->kind) {
    case Term::Kind::Rational:
      out += rat_to_string(t->value);
      break;
    case Term::Kind::Variable:
      out += to_string(t->var);
      break;
    case Term::Kind::Add:
      print_rec(t->a, kSum, out);
      if (t->b->kind == Term::Kind::Neg) {
        out += "-";
        print_rec(t->b->a, kProd, out);
      } else {
        out += "+";
        print_rec(t->b, kProd, out);
      }
      break;
    case Term::Kind::Neg:
      out += "-";
      print_rec(t->a, kUnary, out);
      break;
    case Term::Kind::Mul:
      print_rec(t->a, kProd, out);
      out += "*";
      print_rec(t->b, kUnary, out);
      break;
    case Term::Kind::IntPow:
      print_rec(t->a, kAtom, out);
      out += "^" + std::to_string(t->power);
      break;
    case Term::Kind::Exp:
      out += "E(";
      print_rec(t->a, kSum, out);
      out += ")";
      break;
    case Term::Kind::Der:
      out += "D(";
      print_rec(t->a, kSum, out);
      out += ")";
      break;
    case Term::Kind::Inv:
      out += "inv(";
      print_rec(t->a, kSum, out);
      out += ")";
      break;
  }
  if (parens) out += ")";
}

}  // namespace

std::string print_term(const TermPtr& t) {
  std::string out;
  print_rec(t, kSum, out);
  return out;
}

FormulaAST parse_formula(const std::string& text) {
  Parser p{text};
  FormulaAST f;
  while (true) {
    FormulaAtom atom;
    atom.term = p.sum();
    if (p.take('=')) {
      atom.is_equation = true;
    } else if (p.take('!')) {
      p.expect('=', "after '!'");
      atom.is_equation = false;
    } else {
      throw SyntaxError("expected '=' or '!='", p.i);
    }
    std::size_t zero_pos = p.i;
    if (p.digits() != 0) throw SyntaxError("right-hand side must be 0", zero_pos);
    f.atoms.push_back(std::move(atom));
    if (p.at_end()) break;
    p.expect('&', "between conjuncts");
  }
  return f;
}

std::string print_formula(const FormulaAST& f) {
  std::string out;
  for (std::size_t k = 0; k < f.atoms.size(); ++k) {
    if (k) out += " & ";
    out += print_term(f.atoms[k].term);
    out += f.atoms[k].is_equation ? " = 0" : " != 0";
  }
  return out;
}

namespace {

// t is already normalized; produces the normalized derivative of t.
TermPtr push_der(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Rational:
      return t_rat(0);
    case Term::Kind::Variable:
    case Term::Kind::Der:
      return t_der(t);
    case Term::Kind::Add:
      return t_add(push_der(t->a), push_der(t->b));
    case Term::Kind::Neg:
      return t_neg(push_der(t->a));
    case Term::Kind::Mul:
      return t_add(t_mul(push_der(t->a), t->b), t_mul(t->a, push_der(t->b)));
    case Term::Kind::IntPow: {
      if (t->power == 0) return t_rat(0);
      if (t->power == 1) return push_der(t->a);
      TermPtr lowered = t->power == 2 ? t->a : t_pow(t->a, t->power - 1);
      return t_mul(t_mul(t_rat(t->power), lowered), push_der(t->a));
    }
    case Term::Kind::Exp:
      return t_mul(push_der(t->a), t);
    case Term::Kind::Inv:
      throw UnsupportedError("derivative of inv(...) is not representable here");
  }
  throw UnsupportedError("derivative of unknown node");
}

}  // namespace

TermPtr delta_normalize(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Rational:
    case Term::Kind::Variable:
      return t;
    case Term::Kind::Add:
      return t_add(delta_normalize(t->a), delta_normalize(t->b));
    case Term::Kind::Neg:
      return t_neg(delta_normalize(t->a));
    case Term::Kind::Mul:
      return t_mul(delta_normalize(t->a), delta_normalize(t->b));
    case Term::Kind::IntPow:
      return t_pow(delta_normalize(t->a), t->power);
    case Term::Kind::Exp:
      return t_exp(delta_normalize(t->a));
    case Term::Kind::Inv:
      return t_inv(delta_normalize(t->a));
    case Term::Kind::Der:
      return push_der(delta_normalize(t->a));
  }
  throw UnsupportedError("unknown node");
}

FormulaAST delta_normalize(const FormulaAST& f) {
  FormulaAST out;
  out.atoms.reserve(f.atoms.size());
  for (const auto& a : f.atoms) out.atoms.push_back({delta_normalize(a.term), a.is_equation});
  return out;
}

std::uint32_t derivative_order(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Rational:
      return 0;
    case Term::Kind::Variable:
      return t->var.order;
    case Term::Kind::Der:
      return 1 + derivative_order(t->a);
    case Term::Kind::Add:
    case Term::Kind::Mul:
      return std::max(derivative_order(t->a), derivative_order(t->b));
    case Term::Kind::Neg:
    case Term::Kind::IntPow:
    case Term::Kind::Exp:
    case Term::Kind::Inv:
      return derivative_order(t->a);
  }
  return 0;
}

namespace {

bool is_one_epoly(const EPoly& p) { return p.is_poly() && p.base().is_constant() && p.scalar_const() == 1; }

// Moves a constant denominator into the numerator so denominators stay
// genuinely structural.
FoldedTerm normalized(FoldedTerm f) {
  if (f.den.is_poly() && f.den.base().is_constant()) {
    Rational c = f.den.scalar_const();
    f.num = f.num.scaled(Rational(1) / c);
    f.den = EPoly::one();
  }
  return f;
}

FoldedTerm fold_rec(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Rational:
      return {EPoly::constant(t->value), EPoly::one()};
    case Term::Kind::Variable:
      return {EPoly::var(t->var), EPoly::one()};
    case Term::Kind::Der: {
      std::uint32_t depth = 0;
      const Term* cur = t.get();
      while (cur->kind == Term::Kind::Der) {
        ++depth;
        cur = cur->a.get();
      }
      if (cur->kind != Term::Kind::Variable) {
        throw UnsupportedError("derivative left on a non-variable after normalization");
      }
      VarId v = cur->var;
      v.order += depth;
      return {EPoly::var(v), EPoly::one()};
    }
    case Term::Kind::Add: {
      FoldedTerm x = fold_rec(t->a);
      FoldedTerm y = fold_rec(t->b);
      if (is_one_epoly(x.den) && is_one_epoly(y.den)) return {x.num + y.num, x.den};
      return normalized({x.num * y.den + y.num * x.den, x.den * y.den});
    }
    case Term::Kind::Neg: {
      FoldedTerm x = fold_rec(t->a);
      return {-x.num, x.den};
    }
    case Term::Kind::Mul: {
      FoldedTerm x = fold_rec(t->a);
      FoldedTerm y = fold_rec(t->b);
      return normalized({x.num * y.num, x.den * y.den});
    }
    case Term::Kind::IntPow: {
      FoldedTerm x = fold_rec(t->a);
      return normalized({x.num.pow(t->power), x.den.pow(t->power)});
    }
    case Term::Kind::Exp: {
      FoldedTerm x = fold_rec(t->a);
      if (!is_one_epoly(x.den)) throw UnsupportedError("E over a genuine quotient");
      return {exp_apply(x.num), EPoly::one()};
    }
    case Term::Kind::Inv: {
      FoldedTerm x = fold_rec(t->a);
      if (x.num.is_zero()) throw DomainError("inv of zero");
      return normalized({x.den, x.num});
    }
  }
  throw UnsupportedError("unknown node");
}

}  // namespace

FoldedTerm fold_term(const TermPtr& t) { return fold_rec(delta_normalize(t)); }

EPoly term_to_epoly(const TermPtr& t) {
  FoldedTerm f = fold_term(t);
  if (!is_one_epoly(f.den)) throw UnsupportedError("quotient where a polynomial is required");
  return f.num;
}

EPoly parse_epoly(const std::string& text) { return term_to_epoly(parse_term(text)); }

namespace {

// One addend: coefficient * monomial * optional E(argument).
TermPtr addend(const Rational& coeff, const Monomial& mon, const TermPtr& exp_factor) {
  Rational mag = coeff < 0 ? -coeff : coeff;
  TermPtr prod;
  if (mag != 1 || (mon.is_one() && !exp_factor)) prod = t_rat(mag);
  for (const auto& [v, e] : mon.exps) {
    TermPtr f = e == 1 ? t_var(v) : t_pow(t_var(v), e);
    prod = prod ? t_mul(prod, f) : f;
  }
  if (exp_factor) prod = prod ? t_mul(prod, exp_factor) : exp_factor;
  if (coeff < 0) prod = t_neg(prod);
  return prod;
}

void append_poly_terms(const Poly& p, const TermPtr& exp_factor, TermPtr& sum) {
  for (const auto& [mon, coeff] : p.terms) {
    TermPtr a = addend(coeff, mon, exp_factor);
    sum = sum ? t_add(sum, a) : a;
  }
}

}  // namespace

TermPtr epoly_to_term(const EPoly& p) {
  TermPtr sum;
  append_poly_terms(p.base(), nullptr, sum);
  for (const auto& et : p.exp_terms()) {
    append_poly_terms(et.coeff, t_exp(epoly_to_term(*et.exponent)), sum);
  }
  return sum ? sum : t_rat(0);
}

std::string print_epoly(const EPoly& p) { return print_term(epoly_to_term(p)); }

StarSystem star_transform(const FormulaAST& phi) {
  if (phi.atoms.empty()) throw ShapeError("empty formula");
  StarSystem sys;
  auto push_unique = [](std::vector<EPoly>& v, const EPoly& p) {
    for (const auto& q : v) {
      if (q == p) return;
    }
    v.push_back(p);
  };
  for (const auto& atomf : phi.atoms) {
    TermPtr n = delta_normalize(atomf.term);
    sys.order = std::max(sys.order, derivative_order(n));
    FoldedTerm f = fold_rec(n);
    if (atomf.is_equation) {
      sys.equations.push_back(f.num);
    } else {
      push_unique(sys.inequations, f.num);
    }
    if (!is_one_epoly(f.den)) push_unique(sys.inequations, f.den);
  }
  return sys;
}

}  // namespace expderiv
