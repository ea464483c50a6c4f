#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "expderiv/epoly.hpp"

namespace expderiv {

// Surface syntax tree. Grammar (whitespace insignificant):
//
//   term  := sum
//   sum   := prod (('+' | '-') prod)*
//   prod  := unary ('*' unary)*
//   unary := '-' unary | atom ('^' nat)?
//   atom  := rat | ident | 'E' '(' term ')' | 'D' '(' term ')'
//          | 'inv' '(' term ')' | '(' term ')'
//   rat   := nat ('/' posnat)?
//   ident := letter (letter | digit | '_')*
//
// E, D and inv are reserved words. Subtraction parses as Add(a, Neg(b)) and
// a leading minus on a literal as Neg(lit), so literals in the tree are
// always nonnegative and printing round-trips structurally. Identifiers
// ending in _d<k> decode to derivative coordinates (base, k).
struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Rational, Variable, Add, Neg, Mul, IntPow, Exp, Der, Inv };
  Kind kind;
  Rational value;        // Rational
  VarId var;             // Variable
  TermPtr a, b;          // children (b only for Add/Mul)
  std::uint32_t power = 0;  // IntPow exponent
};

TermPtr t_rat(const Rational& r);
TermPtr t_var(const VarId& v);
TermPtr t_add(TermPtr a, TermPtr b);
TermPtr t_neg(TermPtr a);
TermPtr t_sub(TermPtr a, TermPtr b);
TermPtr t_mul(TermPtr a, TermPtr b);
TermPtr t_pow(TermPtr a, std::uint32_t k);
TermPtr t_exp(TermPtr a);
TermPtr t_der(TermPtr a);
TermPtr t_inv(TermPtr a);

bool term_equal(const TermPtr& a, const TermPtr& b);

// SyntaxError (with position) on malformed input, including zero
// denominators in literals.
TermPtr parse_term(const std::string& text);

// Deterministic, minimally parenthesized; parse_term(print_term(t)) == t.
std::string print_term(const TermPtr& t);

// Conjunction of sign conditions on terms; always nonempty.
struct FormulaAtom {
  TermPtr term;
  bool is_equation;  // true: term = 0, false: term != 0
};
struct FormulaAST {
  std::vector<FormulaAtom> atoms;
};

FormulaAST parse_formula(const std::string& text);
std::string print_formula(const FormulaAST& f);

// Pushes D inward (additivity, Leibniz, chain rule for powers and E,
// D(rational) = 0) until D sits only on variables, possibly as towers
// D(D(x)). Idempotent. UnsupportedError if D meets inv.
TermPtr delta_normalize(const TermPtr& t);
FormulaAST delta_normalize(const FormulaAST& f);

// Derivative order of a normalized term: max D-tower depth plus the order
// already carried by the variable underneath.
std::uint32_t derivative_order(const TermPtr& t);

// Folds a D-free (after internal normalization) term into num/den exponential
// polynomials. D^j(x) becomes the coordinate (x, j). Denominators arise only
// from inv; E over a genuine quotient is UnsupportedError, division by a
// structural zero is DomainError.
struct FoldedTerm {
  EPoly num;
  EPoly den;  // EPoly::one() when no inv was involved
};
FoldedTerm fold_term(const TermPtr& t);

// fold_term with the requirement that no denominator appears
// (UnsupportedError otherwise).
EPoly term_to_epoly(const TermPtr& t);
EPoly parse_epoly(const std::string& text);

// Canonical term for an EPoly; term_to_epoly(epoly_to_term(p)) == p.
TermPtr epoly_to_term(const EPoly& p);
std::string print_epoly(const EPoly& p);

// Quantifier-free system over derivative coordinates obtained by replacing
// D^j(x) with (x, j) in every atom. Equations come from "= 0" atoms (their
// denominators move to the inequation side), inequations from "!= 0" atoms.
struct StarSystem {
  std::uint32_t order = 0;  // max derivative order present, minimal by construction
  std::vector<EPoly> equations;
  std::vector<EPoly> inequations;
};

StarSystem star_transform(const FormulaAST& phi);

}  // namespace expderiv
