#ifndef ROOTGEO_FIELD_HPP
#define ROOTGEO_FIELD_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "rootgeo/errors.hpp"
#include "rootgeo/rng.hpp"

namespace rootgeo {

// ---------------------------------------------------------------------------
// Field descriptions.
//
// Supported coefficient fields: F_p, Q, F_p(t), Q(t). The function fields
// carry the one-element derivation basis Omega = {t}; the other two have
// Omega empty (they admit only the null derivation).
// ---------------------------------------------------------------------------

enum class FieldKind { Prime, Rationals, PrimeFunction, RationalsFunction };

struct FieldSpec {
  FieldKind kind = FieldKind::Rationals;
  std::uint64_t p = 0;  // modulus for Prime / PrimeFunction

  // grammar: "fp:<p>" | "q" | "fp(t):<p>" | "q(t)"
  static FieldSpec parse(std::string_view s);
  std::string to_string() const;

  bool is_function_field() const {
    return kind == FieldKind::PrimeFunction || kind == FieldKind::RationalsFunction;
  }
  std::size_t derivation_rank() const { return is_function_field() ? 1 : 0; }
  std::uint64_t characteristic() const {
    return (kind == FieldKind::Prime || kind == FieldKind::PrimeFunction) ? p : 0;
  }
  bool operator==(const FieldSpec&) const = default;
};

bool is_prime_u64(std::uint64_t n);

// ---------------------------------------------------------------------------
// Scalar layers: residues mod p, arbitrary-precision rationals, and dense
// univariate polynomials / rational functions over either.
// ---------------------------------------------------------------------------

struct Fp {
  std::uint64_t p = 0;
  std::uint64_t v = 0;  // 0 <= v < p
};

using Rat = mpq_class;

namespace detail {

inline std::uint64_t fp_add(std::uint64_t p, std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  return s >= p ? s - p : s;
}
inline std::uint64_t fp_neg(std::uint64_t p, std::uint64_t a) { return a ? p - a : 0; }
inline std::uint64_t fp_mul(std::uint64_t p, std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}
std::uint64_t fp_inv(std::uint64_t p, std::uint64_t a);  // throws DivisionByZero on 0

// --- coefficient concept over C in {Fp, Rat} ---

inline Fp czero(const Fp& proto) { return Fp{proto.p, 0}; }
inline Rat czero(const Rat&) { return Rat(0); }
inline Fp cone(const Fp& proto) { return Fp{proto.p, 1}; }
inline Rat cone(const Rat&) { return Rat(1); }
inline bool cis_zero(const Fp& a) { return a.v == 0; }
inline bool cis_zero(const Rat& a) { return a == 0; }
inline bool ceq(const Fp& a, const Fp& b) { return a.v == b.v; }
inline bool ceq(const Rat& a, const Rat& b) { return a == b; }
inline Fp cadd(const Fp& a, const Fp& b) { return Fp{a.p, fp_add(a.p, a.v, b.v)}; }
inline Rat cadd(const Rat& a, const Rat& b) { return a + b; }
inline Fp cneg(const Fp& a) { return Fp{a.p, fp_neg(a.p, a.v)}; }
inline Rat cneg(const Rat& a) { return -a; }
inline Fp csub(const Fp& a, const Fp& b) { return cadd(a, cneg(b)); }
inline Rat csub(const Rat& a, const Rat& b) { return a - b; }
inline Fp cmul(const Fp& a, const Fp& b) { return Fp{a.p, fp_mul(a.p, a.v, b.v)}; }
inline Rat cmul(const Rat& a, const Rat& b) { return a * b; }
inline Fp cinv(const Fp& a) { return Fp{a.p, fp_inv(a.p, a.v)}; }
inline Rat cinv(const Rat& a) {
  if (a == 0) throw DivisionByZero();
  return 1 / a;
}
inline Fp cdiv(const Fp& a, const Fp& b) { return cmul(a, cinv(b)); }
inline Rat cdiv(const Rat& a, const Rat& b) {
  if (b == 0) throw DivisionByZero();
  return a / b;
}
// multiply by a nonneg machine integer (formal-derivative exponents)
inline Fp cmul_uint(const Fp& a, std::uint64_t k) { return Fp{a.p, fp_mul(a.p, a.v, k % a.p)}; }
inline Rat cmul_uint(const Rat& a, std::uint64_t k) {
  return a * Rat(static_cast<unsigned long>(k));
}
std::size_t csize(const Fp&);
std::size_t csize(const Rat&);
std::string cstr(const Fp& a);
std::string cstr(const Rat& a);

// --- dense polynomials, coefficient 0 first; empty vector == 0 ---

template <class C>
struct Poly {
  std::vector<C> c;
  bool is_zero() const { return c.empty(); }
  std::size_t degree() const { return c.empty() ? 0 : c.size() - 1; }
};

template <class C>
void ptrim(Poly<C>& a) {
  while (!a.c.empty() && cis_zero(a.c.back())) a.c.pop_back();
}

template <class C>
Poly<C> pconst(const C& v) {
  Poly<C> r;
  if (!cis_zero(v)) r.c.push_back(v);
  return r;
}

template <class C>
bool peq(const Poly<C>& a, const Poly<C>& b) {
  if (a.c.size() != b.c.size()) return false;
  for (std::size_t i = 0; i < a.c.size(); ++i)
    if (!ceq(a.c[i], b.c[i])) return false;
  return true;
}

template <class C>
Poly<C> padd(const Poly<C>& a, const Poly<C>& b) {
  Poly<C> r = a.c.size() >= b.c.size() ? a : b;
  const Poly<C>& s = a.c.size() >= b.c.size() ? b : a;
  for (std::size_t i = 0; i < s.c.size(); ++i) r.c[i] = cadd(r.c[i], s.c[i]);
  ptrim(r);
  return r;
}

template <class C>
Poly<C> pneg(const Poly<C>& a) {
  Poly<C> r = a;
  for (auto& x : r.c) x = cneg(x);
  return r;
}

template <class C>
Poly<C> psub(const Poly<C>& a, const Poly<C>& b) {
  return padd(a, pneg(b));
}

template <class C>
Poly<C> pmul(const Poly<C>& a, const Poly<C>& b) {
  Poly<C> r;
  if (a.is_zero() || b.is_zero()) return r;
  r.c.assign(a.c.size() + b.c.size() - 1, czero(a.c.front()));
  for (std::size_t i = 0; i < a.c.size(); ++i)
    for (std::size_t j = 0; j < b.c.size(); ++j)
      r.c[i + j] = cadd(r.c[i + j], cmul(a.c[i], b.c[j]));
  ptrim(r);
  return r;
}

template <class C>
Poly<C> pscale(const Poly<C>& a, const C& k) {
  Poly<C> r;
  if (cis_zero(k)) return r;
  r = a;
  for (auto& x : r.c) x = cmul(x, k);
  ptrim(r);
  return r;
}

// division with remainder by a nonzero divisor; the leading coefficient of r
// cancels exactly each round, so the loop terminates
template <class C>
void pdivmod(const Poly<C>& a, const Poly<C>& b, Poly<C>& q, Poly<C>& r) {
  if (b.is_zero()) throw DivisionByZero();
  q.c.clear();
  r = a;
  if (a.c.size() < b.c.size()) return;
  q.c.assign(a.c.size() - b.c.size() + 1, czero(b.c.back()));
  C lead_inv = cinv(b.c.back());
  while (!r.is_zero() && r.c.size() >= b.c.size()) {
    C f = cmul(r.c.back(), lead_inv);
    std::size_t shift = r.c.size() - b.c.size();
    q.c[shift] = f;
    for (std::size_t i = 0; i < b.c.size(); ++i)
      r.c[shift + i] = csub(r.c[shift + i], cmul(f, b.c[i]));
    ptrim(r);
  }
  ptrim(q);
}

template <class C>
Poly<C> pmonic(const Poly<C>& a) {
  if (a.is_zero()) return a;
  return pscale(a, cinv(a.c.back()));
}

// monic gcd; Euclid with monic normalization each step to damp growth
template <class C>
Poly<C> pgcd(Poly<C> a, Poly<C> b) {
  a = pmonic(a);
  b = pmonic(b);
  while (!b.is_zero()) {
    Poly<C> q, r;
    pdivmod(a, b, q, r);
    a = b;
    b = pmonic(r);
  }
  return a;
}

// Over Q the monic Euclid chain explodes coefficient sizes; run a primitive
// pseudo-remainder sequence over Z instead and hand back the monic result.
Poly<Rat> pgcd(Poly<Rat> a, Poly<Rat> b);

// formal derivative d/dt
template <class C>
Poly<C> pderive(const Poly<C>& a) {
  Poly<C> r;
  if (a.c.size() <= 1) return r;
  r.c.reserve(a.c.size() - 1);
  for (std::size_t k = 1; k < a.c.size(); ++k) r.c.push_back(cmul_uint(a.c[k], k));
  ptrim(r);
  return r;
}

template <class C>
std::size_t psize(const Poly<C>& a) {
  std::size_t s = 1;
  for (const auto& x : a.c) s += csize(x);
  return s;
}

std::string poly_to_string(const Poly<Fp>& a);
std::string poly_to_string(const Poly<Rat>& a);

// --- rational functions: gcd-reduced, monic denominator ---

template <class C>
struct RatFun {
  Poly<C> num;
  Poly<C> den;  // nonzero, monic
};

template <class C>
RatFun<C> rf_make(Poly<C> num, Poly<C> den) {
  if (den.is_zero()) throw DivisionByZero();
  if (num.is_zero()) {
    Poly<C> one;
    one.c.push_back(cone(den.c.front()));
    return RatFun<C>{Poly<C>{}, one};
  }
  Poly<C> g = pgcd(num, den);
  if (!(g.c.size() == 1)) {
    Poly<C> q, r;
    pdivmod(num, g, q, r);
    num = q;
    pdivmod(den, g, q, r);
    den = q;
  }
  C lead = den.c.back();
  den = pscale(den, cinv(lead));
  num = pscale(num, cinv(lead));
  return RatFun<C>{std::move(num), std::move(den)};
}

template <class C>
bool rf_eq(const RatFun<C>& a, const RatFun<C>& b) {
  return peq(a.num, b.num) && peq(a.den, b.den);
}

template <class C>
RatFun<C> rf_add(const RatFun<C>& a, const RatFun<C>& b) {
  return rf_make(padd(pmul(a.num, b.den), pmul(b.num, a.den)), pmul(a.den, b.den));
}
template <class C>
RatFun<C> rf_neg(const RatFun<C>& a) {
  return RatFun<C>{pneg(a.num), a.den};
}
template <class C>
RatFun<C> rf_sub(const RatFun<C>& a, const RatFun<C>& b) {
  return rf_add(a, rf_neg(b));
}
template <class C>
RatFun<C> rf_mul(const RatFun<C>& a, const RatFun<C>& b) {
  return rf_make(pmul(a.num, b.num), pmul(a.den, b.den));
}
template <class C>
RatFun<C> rf_inv(const RatFun<C>& a) {
  if (a.num.is_zero()) throw DivisionByZero();
  return rf_make(a.den, a.num);
}
template <class C>
RatFun<C> rf_div(const RatFun<C>& a, const RatFun<C>& b) {
  if (b.num.is_zero()) throw DivisionByZero();
  return rf_make(pmul(a.num, b.den), pmul(a.den, b.num));
}
// d/dt via the quotient rule, reduced
template <class C>
RatFun<C> rf_derive(const RatFun<C>& a) {
  Poly<C> n = psub(pmul(pderive(a.num), a.den), pmul(a.num, pderive(a.den)));
  return rf_make(std::move(n), pmul(a.den, a.den));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// FieldElem: one exact element of one of the four supported fields. The
// variant alternative pins the field kind and (through Fp coefficients) the
// characteristic, so a FieldSpec is recoverable from any value.
// ---------------------------------------------------------------------------

class FieldElem {
 public:
  using Storage =
      std::variant<Fp, Rat, detail::RatFun<Fp>, detail::RatFun<Rat>>;

  FieldElem() : v_(Rat(0)) {}
  explicit FieldElem(Storage v) : v_(std::move(v)) {}

  FieldSpec spec() const;
  bool is_zero() const;
  bool is_one() const;

  FieldElem operator+(const FieldElem& o) const;
  FieldElem operator-(const FieldElem& o) const;
  FieldElem operator*(const FieldElem& o) const;
  FieldElem operator/(const FieldElem& o) const;  // DivisionByZero
  FieldElem operator-() const;
  FieldElem inv() const;  // DivisionByZero
  bool operator==(const FieldElem& o) const;
  bool operator!=(const FieldElem& o) const { return !(*this == o); }

  // crude measure of representation size; used for pivot selection
  std::size_t repr_size() const;

  std::string to_string() const;

  const Storage& storage() const { return v_; }

 private:
  Storage v_;
};

// formal derivation d_omega; IndexOutOfRange when omega is not an index of
// the field's derivation basis
FieldElem derive(const FieldElem& x, std::size_t omega = 0);
std::vector<std::size_t> derivation_support(const FieldElem& x);

// For function-field elements: the canonical numerator / denominator as field
// elements (denominator 1). Over the plain fields these return x and 1.
FieldElem numerator(const FieldElem& x);
FieldElem denominator(const FieldElem& x);

// Row primitivization: scales a row of same-field elements so that entries
// become denominator-free with trivial common content, returning the scalar
// applied. Exact row scalings like this are what keep Gaussian elimination
// over Q, F_p(t) and Q(t) from swelling. Prime-field rows return 1 untouched.
bool needs_primitivize(const FieldSpec& spec);
FieldElem primitivize_row(std::vector<FieldElem>& row);

// Specialization of a function-field element at t = tau (an element of the
// base field: Rationals for q(t), Prime for fp(t):p). Exact; DivisionByZero
// at poles. Identity on base-field elements.
FieldElem evaluate_at(const FieldElem& x, const FieldElem& tau);

// ---------------------------------------------------------------------------
// Field: element factory bound to one FieldSpec.
// ---------------------------------------------------------------------------

struct SampleParams {
  unsigned degree_bound = 2;  // max degree of sampled polynomials
  unsigned coeff_bound = 9;   // |numerator| bound for sampled rationals
};

class Field {
 public:
  explicit Field(FieldSpec spec);
  static Field parse(std::string_view grammar) { return Field(FieldSpec::parse(grammar)); }

  const FieldSpec& spec() const { return spec_; }
  std::size_t derivation_rank() const { return spec_.derivation_rank(); }
  std::uint64_t characteristic() const { return spec_.characteristic(); }
  bool operator==(const Field& o) const { return spec_ == o.spec_; }

  FieldElem zero() const;
  FieldElem one() const;
  FieldElem from_int(long v) const;
  FieldElem t() const;  // the transcendental; throws NoDerivations otherwise

  FieldElem parse_elem(std::string_view s) const;  // ParseError on bad input

  // Deterministic bounded sampler (documented draw order; see README).
  FieldElem sample(Rng& rng, const SampleParams& sp = {}) const;
  FieldElem sample_nonzero(Rng& rng, const SampleParams& sp = {}) const;

 private:
  FieldSpec spec_;
};

}  // namespace rootgeo

#endif
