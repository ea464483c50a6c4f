#include "expderiv/padic.hpp"

#include <limits>
#include <sstream>

namespace expderiv {

namespace {

constexpr long long kExactZeroVal = std::numeric_limits<long long>::max() / 4;

Int pow_int(long long p, long long e) {
  Int r = 1;
  Int base = p;
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

// Extended Euclid; a must be coprime to m.
Int mod_inverse(Int a, const Int& m) {
  a %= m;
  if (a < 0) a += m;
  Int r0 = m, r1 = a, s0 = 0, s1 = 1;
  while (r1 != 0) {
    Int q = r0 / r1;
    Int r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
    Int s2 = s0 - q * s1;
    s0 = s1;
    s1 = s2;
  }
  if (r0 != 1) throw DomainError("modular inverse of a non-unit");
  s0 %= m;
  if (s0 < 0) s0 += m;
  return s0;
}

long long int_valuation(Int& u, long long p) {
  long long v = 0;
  while (u % p == 0) {
    u /= p;
    ++v;
  }
  return v;
}

}  // namespace

Padic Padic::zero(long long p) {
  Padic z;
  z.p_ = p;
  z.prec_ = 0;
  z.val_ = kExactZeroVal;
  z.unit_ = 0;
  return z;
}

Padic Padic::from_parts(long long p, int prec, long long val, Int u) {
  if (p < 2) throw DomainError("p-adic prime must be at least 2");
  if (prec < 1) throw DomainError("p-adic precision must be positive");
  Int mod = pow_int(p, prec);
  u %= mod;
  if (u < 0) u += mod;
  if (u == 0) {
    // All retained digits vanished: only O(p^(val+prec)) is known.
    Padic z;
    z.p_ = p;
    z.prec_ = prec;
    z.val_ = val + prec;
    z.unit_ = 0;
    return z;
  }
  val += int_valuation(u, p);
  Padic r;
  r.p_ = p;
  r.prec_ = prec;
  r.val_ = val;
  r.unit_ = u;
  return r;
}

Padic Padic::from_rational(const Rational& r, long long p, int prec) {
  if (r == 0) {
    Padic z = zero(p);
    z.prec_ = prec;
    return z;
  }
  Int num = rat_num(r);
  Int den = rat_den(r);
  long long v = 0;
  v += int_valuation(num, p);
  v -= int_valuation(den, p);
  Int mod = pow_int(p, prec);
  num %= mod;
  if (num < 0) num += mod;
  den %= mod;
  Int u = num * mod_inverse(den, mod) % mod;
  return from_parts(p, prec, v, u);
}

Padic Padic::operator+(const Padic& o) const {
  if (p_ != o.p_) throw DomainError("p-adic arithmetic across different primes");
  if (is_zeroish() && o.is_zeroish()) {
    Padic z;
    z.p_ = p_;
    z.prec_ = std::min(prec_, o.prec_);
    z.val_ = std::min(val_, o.val_);
    z.unit_ = 0;
    return z;
  }
  // O(p^v) + unit-bearing y: y survives with absolute precision capped at v.
  if (is_zeroish()) return o.truncated_abs(val_);
  if (o.is_zeroish()) return truncated_abs(o.val_);
  long long v = std::min(val_, o.val_);
  long long abs_prec = std::min(val_ + prec_, o.val_ + o.prec_);
  Int mod = pow_int(p_, abs_prec - v);
  Int sum = (unit_ * pow_int(p_, val_ - v) + o.unit_ * pow_int(p_, o.val_ - v)) % mod;
  if (sum == 0) {
    Padic z;
    z.p_ = p_;
    z.prec_ = std::min(prec_, o.prec_);
    z.val_ = abs_prec;
    z.unit_ = 0;
    return z;
  }
  long long s = int_valuation(sum, p_);
  Padic r;
  r.p_ = p_;
  r.val_ = v + s;
  r.prec_ = static_cast<int>(abs_prec - r.val_);
  r.unit_ = sum;
  return r;
}

Padic Padic::operator-() const {
  if (is_zeroish()) return *this;
  Padic r = *this;
  r.unit_ = pow_int(p_, prec_) - unit_;
  return r;
}

Padic Padic::operator-(const Padic& o) const { return *this + (-o); }

Padic Padic::operator*(const Padic& o) const {
  if (p_ != o.p_) throw DomainError("p-adic arithmetic across different primes");
  if (is_zeroish() || o.is_zeroish()) {
    // O(p^a) * (p^b * unit) = O(p^(a+b)); same bound when both are zeroish.
    Padic z;
    z.p_ = p_;
    z.prec_ = std::min(prec_, o.prec_);
    z.val_ = std::min(val_ + o.val_, kExactZeroVal);
    z.unit_ = 0;
    return z;
  }
  int prec = std::min(prec_, o.prec_);
  Int mod = pow_int(p_, prec);
  Padic r;
  r.p_ = p_;
  r.prec_ = prec;
  r.val_ = val_ + o.val_;
  r.unit_ = unit_ * o.unit_ % mod;
  return r;
}

Padic Padic::operator/(const Padic& o) const {
  if (p_ != o.p_) throw DomainError("p-adic arithmetic across different primes");
  if (o.is_zeroish()) throw DomainError("division by a p-adic value indistinguishable from zero");
  if (is_zeroish()) {
    Padic z;
    z.p_ = p_;
    z.prec_ = std::min(prec_, o.prec_);
    z.val_ = val_ - o.val_;
    z.unit_ = 0;
    return z;
  }
  int prec = std::min(prec_, o.prec_);
  Int mod = pow_int(p_, prec);
  Padic r;
  r.p_ = p_;
  r.prec_ = prec;
  r.val_ = val_ - o.val_;
  r.unit_ = unit_ * mod_inverse(o.unit_, mod) % mod;
  return r;
}

Padic Padic::pow(std::uint32_t e) const {
  if (p_ < 2) throw DomainError("pow on an uninitialized p-adic");
  Padic acc = from_parts(p_, prec_ > 0 ? prec_ : 1, 0, 1);
  Padic base = *this;
  while (e > 0) {
    if (e & 1u) acc = acc * base;
    base = base * base;
    e >>= 1u;
  }
  return acc;
}

Padic Padic::truncated_abs(long long abs_prec) const {
  if (is_zeroish()) {
    Padic z = *this;
    z.val_ = std::min(val_, abs_prec);
    return z;
  }
  if (val_ >= abs_prec) {
    Padic z;
    z.p_ = p_;
    z.prec_ = prec_;
    z.val_ = abs_prec;
    z.unit_ = 0;
    return z;
  }
  long long keep = abs_prec - val_;
  if (keep >= prec_) return *this;
  return from_parts(p_, static_cast<int>(keep), val_, unit_);
}

Int Padic::residue_mod(int N) const {
  if (is_zeroish()) return 0;
  if (val_ < 0) throw DomainError("residue of a p-adic with negative valuation");
  Int mod = pow_int(p_, N);
  if (val_ >= N) return 0;
  return unit_ * pow_int(p_, val_) % mod;
}

std::string Padic::to_string() const {
  std::ostringstream os;
  if (is_zeroish()) {
    if (val_ >= kExactZeroVal / 2) {
      os << "0";
    } else {
      os << "0 mod " << p_ << "^" << val_;
    }
    return os.str();
  }
  os << p_ << "^" << val_ << "*" << unit_ << " mod " << p_ << "^" << prec_;
  return os.str();
}

long long factorial_valuation(long long i, long long p) {
  long long v = 0;
  long long q = p;
  while (q <= i) {
    v += i / q;
    if (q > i / p) break;  // next q would overflow past i anyway
    q *= p;
  }
  return v;
}

Padic exp_padic(const Padic& x, int target_prec) {
  long long p = x.prime();
  if (p < 2) throw DomainError("exp of an uninitialized p-adic");
  long long vmin = (p == 2) ? 2 : 1;
  if (x.is_zeroish()) {
    // x = O(p^v): exp(x) = 1 + O(p^v) provided the bound itself is in
    // the convergence domain.
    if (x.valuation() < vmin)
      throw DomainError("exp undefined: p-adic argument valuation below convergence domain");
    long long v = std::min<long long>(x.valuation(), target_prec);
    return Padic::from_parts(p, static_cast<int>(v), 0, 1);
  }
  long long v = x.valuation();
  if (v < vmin)
    throw DomainError("exp undefined: p-adic argument valuation below convergence domain");
  // Term i has valuation i*v - v_p(i!) >= i*v - (i-1)/(p-1), strictly
  // increasing in i on the domain; run until the bound clears target_prec.
  long long working = target_prec;
  {
    // Precision slack: divisions by i! cost up to v_p(i!) digits.
    long long i = 1;
    while (i * v - factorial_valuation(i, p) < target_prec) ++i;
    working = target_prec + factorial_valuation(i, p) + 2;
  }
  int W = static_cast<int>(working);
  Padic one = Padic::from_parts(p, W, 0, 1);
  // Arithmetic min-combines relative precision, so the result's precision is
  // honestly limited by x's own; never rebuild x wider than it is known.
  Padic sum = one;
  Padic term = one;
  for (long long i = 1;; ++i) {
    term = term * x / Padic::from_rational(Rational(i), p, W);
    sum = sum + term;
    if (i * v - factorial_valuation(i, p) >= target_prec) break;
  }
  return sum.truncated_abs(target_prec);
}

}  // namespace expderiv
