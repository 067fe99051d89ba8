#include "rootgeo/field.hpp"

#include <cctype>
#include <charconv>

namespace rootgeo {

// ---------------------------------------------------------------------------
// primality (deterministic Miller-Rabin for 64-bit)
// ---------------------------------------------------------------------------

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// FieldSpec grammar
// ---------------------------------------------------------------------------

FieldSpec FieldSpec::parse(std::string_view s) {
  auto parse_p = [](std::string_view digits) -> std::uint64_t {
    std::uint64_t p = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
    if (ec != std::errc() || ptr != digits.data() + digits.size())
      throw ParseError("bad modulus in field spec");
    if (!is_prime_u64(p)) throw UnsupportedField("modulus is not prime");
    if (p >= (1ULL << 62)) throw UnsupportedField("modulus too large");
    return p;
  };
  if (s == "q") return FieldSpec{FieldKind::Rationals, 0};
  if (s == "q(t)") return FieldSpec{FieldKind::RationalsFunction, 0};
  if (s.rfind("fp(t):", 0) == 0) return FieldSpec{FieldKind::PrimeFunction, parse_p(s.substr(6))};
  if (s.rfind("fp:", 0) == 0) return FieldSpec{FieldKind::Prime, parse_p(s.substr(3))};
  throw ParseError("unrecognized field spec: " + std::string(s) +
                   " (expected fp:<p>, q, fp(t):<p>, q(t))");
}

std::string FieldSpec::to_string() const {
  switch (kind) {
    case FieldKind::Prime:
      return "fp:" + std::to_string(p);
    case FieldKind::Rationals:
      return "q";
    case FieldKind::PrimeFunction:
      return "fp(t):" + std::to_string(p);
    case FieldKind::RationalsFunction:
      return "q(t)";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// coefficient helpers
// ---------------------------------------------------------------------------

namespace detail {

std::uint64_t fp_inv(std::uint64_t p, std::uint64_t a) {
  if (a == 0) throw DivisionByZero();
  // extended Euclid
  std::int64_t t = 0, newt = 1;
  std::int64_t r = static_cast<std::int64_t>(p), newr = static_cast<std::int64_t>(a);
  while (newr != 0) {
    std::int64_t q = r / newr;
    std::int64_t tmp = t - q * newt;
    t = newt;
    newt = tmp;
    tmp = r - q * newr;
    r = newr;
    newr = tmp;
  }
  if (t < 0) t += static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(t);
}

std::size_t csize(const Fp&) { return 1; }
std::size_t csize(const Rat& a) {
  return mpz_sizeinbase(a.get_num().get_mpz_t(), 2) + mpz_sizeinbase(a.get_den().get_mpz_t(), 2);
}

std::string cstr(const Fp& a) { return std::to_string(a.v); }
std::string cstr(const Rat& a) { return a.get_str(); }

namespace {

// shared poly printer: descending powers, '*' between coefficient and t
template <class C>
std::string poly_to_string_impl(const Poly<C>& a, bool (*negative)(const C&), std::string (*abs_str)(const C&)) {
  if (a.is_zero()) return "0";
  std::string out;
  for (std::size_t k = a.c.size(); k-- > 0;) {
    const C& coef = a.c[k];
    if (cis_zero(coef)) continue;
    bool neg = negative(coef);
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? "-" : "+";
    }
    std::string cs = abs_str(coef);
    if (k == 0) {
      out += cs;
    } else {
      if (cs != "1") {
        out += cs;
        out += "*";
      }
      out += "t";
      if (k > 1) out += "^" + std::to_string(k);
    }
  }
  return out;
}

bool fp_negative(const Fp&) { return false; }
std::string fp_abs(const Fp& a) { return std::to_string(a.v); }
bool rat_negative(const Rat& a) { return sgn(a) < 0; }
std::string rat_abs(const Rat& a) { return Rat(abs(a)).get_str(); }

}  // namespace

std::string poly_to_string(const Poly<Fp>& a) { return poly_to_string_impl<Fp>(a, fp_negative, fp_abs); }
std::string poly_to_string(const Poly<Rat>& a) { return poly_to_string_impl<Rat>(a, rat_negative, rat_abs); }

namespace {

using ZPoly = std::vector<mpz_class>;  // coefficient 0 first, no trailing zeros

void z_trim(ZPoly& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

void z_primitive(ZPoly& v) {
  mpz_class g = 0;
  for (const auto& x : v) g = gcd(g, x);
  if (g > 1)
    for (auto& x : v) x /= g;
  if (!v.empty() && v.back() < 0)
    for (auto& x : v) x = -x;
}

ZPoly z_from_rat(const Poly<Rat>& p) {
  ZPoly v;
  if (p.is_zero()) return v;
  mpz_class l = 1;
  for (const Rat& c : p.c) l = lcm(l, mpz_class(c.get_den()));
  v.reserve(p.c.size());
  for (const Rat& c : p.c) v.push_back(mpz_class(c.get_num()) * (l / c.get_den()));
  z_trim(v);
  z_primitive(v);
  return v;
}

// pseudo-division rounds with per-round content stripping, which keeps the
// intermediate integers near their primitive size
ZPoly z_pseudo_rem(ZPoly a, const ZPoly& b) {
  const mpz_class& lead = b.back();
  while (a.size() >= b.size()) {
    mpz_class f = a.back();
    std::size_t shift = a.size() - b.size();
    for (auto& x : a) x *= lead;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    z_trim(a);
    if (a.empty()) break;
    z_primitive(a);
  }
  return a;
}

}  // namespace

Poly<Rat> pgcd(Poly<Rat> a, Poly<Rat> b) {
  ZPoly x = z_from_rat(a), y = z_from_rat(b);
  if (x.size() < y.size()) std::swap(x, y);
  while (!y.empty()) {
    ZPoly r = z_pseudo_rem(std::move(x), y);
    z_primitive(r);
    x = std::move(y);
    y = std::move(r);
  }
  Poly<Rat> g;
  if (x.empty()) return g;
  g.c.reserve(x.size());
  for (const auto& c : x) {
    Rat q(c, x.back());
    q.canonicalize();
    g.c.push_back(q);
  }
  return g;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// FieldElem
// ---------------------------------------------------------------------------

namespace {

using detail::RatFun;

void check_same(const FieldElem& a, const FieldElem& b) {
  if (a.storage().index() != b.storage().index()) throw FieldMismatch();
  if (const Fp* x = std::get_if<Fp>(&a.storage())) {
    if (x->p != std::get<Fp>(b.storage()).p) throw FieldMismatch();
  } else if (const RatFun<Fp>* x = std::get_if<RatFun<Fp>>(&a.storage())) {
    if (x->den.c.front().p != std::get<RatFun<Fp>>(b.storage()).den.c.front().p) throw FieldMismatch();
  }
}

template <class OpFp, class OpRat, class OpRfFp, class OpRfRat>
FieldElem binop(const FieldElem& a, const FieldElem& b, OpFp ofp, OpRat orat, OpRfFp orffp, OpRfRat orfrat) {
  check_same(a, b);
  switch (a.storage().index()) {
    case 0:
      return FieldElem(ofp(std::get<Fp>(a.storage()), std::get<Fp>(b.storage())));
    case 1:
      return FieldElem(orat(std::get<Rat>(a.storage()), std::get<Rat>(b.storage())));
    case 2:
      return FieldElem(orffp(std::get<RatFun<Fp>>(a.storage()), std::get<RatFun<Fp>>(b.storage())));
    default:
      return FieldElem(orfrat(std::get<RatFun<Rat>>(a.storage()), std::get<RatFun<Rat>>(b.storage())));
  }
}

}  // namespace

FieldSpec FieldElem::spec() const {
  switch (v_.index()) {
    case 0:
      return FieldSpec{FieldKind::Prime, std::get<Fp>(v_).p};
    case 1:
      return FieldSpec{FieldKind::Rationals, 0};
    case 2:
      return FieldSpec{FieldKind::PrimeFunction, std::get<RatFun<Fp>>(v_).den.c.front().p};
    default:
      return FieldSpec{FieldKind::RationalsFunction, 0};
  }
}

bool FieldElem::is_zero() const {
  switch (v_.index()) {
    case 0:
      return std::get<Fp>(v_).v == 0;
    case 1:
      return std::get<Rat>(v_) == 0;
    case 2:
      return std::get<RatFun<Fp>>(v_).num.is_zero();
    default:
      return std::get<RatFun<Rat>>(v_).num.is_zero();
  }
}

bool FieldElem::is_one() const {
  switch (v_.index()) {
    case 0:
      return std::get<Fp>(v_).v == 1 % std::get<Fp>(v_).p;
    case 1:
      return std::get<Rat>(v_) == 1;
    case 2: {
      const auto& r = std::get<RatFun<Fp>>(v_);
      return r.den.c.size() == 1 && r.num.c.size() == 1 && r.num.c[0].v == 1;
    }
    default: {
      const auto& r = std::get<RatFun<Rat>>(v_);
      return r.den.c.size() == 1 && r.num.c.size() == 1 && r.num.c[0] == 1;
    }
  }
}

FieldElem FieldElem::operator+(const FieldElem& o) const {
  using namespace detail;
  return binop(
      *this, o, [](const Fp& a, const Fp& b) { return cadd(a, b); },
      [](const Rat& a, const Rat& b) { return a + b; },
      [](const RatFun<Fp>& a, const RatFun<Fp>& b) { return rf_add(a, b); },
      [](const RatFun<Rat>& a, const RatFun<Rat>& b) { return rf_add(a, b); });
}

FieldElem FieldElem::operator-(const FieldElem& o) const {
  using namespace detail;
  return binop(
      *this, o, [](const Fp& a, const Fp& b) { return csub(a, b); },
      [](const Rat& a, const Rat& b) { return a - b; },
      [](const RatFun<Fp>& a, const RatFun<Fp>& b) { return rf_sub(a, b); },
      [](const RatFun<Rat>& a, const RatFun<Rat>& b) { return rf_sub(a, b); });
}

FieldElem FieldElem::operator*(const FieldElem& o) const {
  using namespace detail;
  return binop(
      *this, o, [](const Fp& a, const Fp& b) { return cmul(a, b); },
      [](const Rat& a, const Rat& b) { return a * b; },
      [](const RatFun<Fp>& a, const RatFun<Fp>& b) { return rf_mul(a, b); },
      [](const RatFun<Rat>& a, const RatFun<Rat>& b) { return rf_mul(a, b); });
}

FieldElem FieldElem::operator/(const FieldElem& o) const {
  using namespace detail;
  return binop(
      *this, o, [](const Fp& a, const Fp& b) { return cdiv(a, b); },
      [](const Rat& a, const Rat& b) { return cdiv(a, b); },
      [](const RatFun<Fp>& a, const RatFun<Fp>& b) { return rf_div(a, b); },
      [](const RatFun<Rat>& a, const RatFun<Rat>& b) { return rf_div(a, b); });
}

FieldElem FieldElem::operator-() const {
  using namespace detail;
  switch (v_.index()) {
    case 0:
      return FieldElem(cneg(std::get<Fp>(v_)));
    case 1:
      return FieldElem(Rat(-std::get<Rat>(v_)));
    case 2:
      return FieldElem(rf_neg(std::get<RatFun<Fp>>(v_)));
    default:
      return FieldElem(rf_neg(std::get<RatFun<Rat>>(v_)));
  }
}

FieldElem FieldElem::inv() const {
  using namespace detail;
  switch (v_.index()) {
    case 0:
      return FieldElem(cinv(std::get<Fp>(v_)));
    case 1:
      return FieldElem(cinv(std::get<Rat>(v_)));
    case 2:
      return FieldElem(rf_inv(std::get<RatFun<Fp>>(v_)));
    default:
      return FieldElem(rf_inv(std::get<RatFun<Rat>>(v_)));
  }
}

bool FieldElem::operator==(const FieldElem& o) const {
  using namespace detail;
  check_same(*this, o);
  switch (v_.index()) {
    case 0:
      return std::get<Fp>(v_).v == std::get<Fp>(o.v_).v;
    case 1:
      return std::get<Rat>(v_) == std::get<Rat>(o.v_);
    case 2:
      return rf_eq(std::get<RatFun<Fp>>(v_), std::get<RatFun<Fp>>(o.v_));
    default:
      return rf_eq(std::get<RatFun<Rat>>(v_), std::get<RatFun<Rat>>(o.v_));
  }
}

std::size_t FieldElem::repr_size() const {
  using namespace detail;
  switch (v_.index()) {
    case 0:
      return 1;
    case 1:
      return csize(std::get<Rat>(v_));
    case 2:
      return psize(std::get<RatFun<Fp>>(v_).num) + psize(std::get<RatFun<Fp>>(v_).den);
    default:
      return psize(std::get<RatFun<Rat>>(v_).num) + psize(std::get<RatFun<Rat>>(v_).den);
  }
}

std::string FieldElem::to_string() const {
  using namespace detail;
  switch (v_.index()) {
    case 0:
      return std::to_string(std::get<Fp>(v_).v);
    case 1:
      return std::get<Rat>(v_).get_str();
    case 2: {
      const auto& r = std::get<RatFun<Fp>>(v_);
      if (r.den.c.size() == 1 && r.den.c[0].v == 1) return poly_to_string(r.num);
      return "(" + poly_to_string(r.num) + ")/(" + poly_to_string(r.den) + ")";
    }
    default: {
      const auto& r = std::get<RatFun<Rat>>(v_);
      if (r.den.c.size() == 1 && r.den.c[0] == 1) return poly_to_string(r.num);
      return "(" + poly_to_string(r.num) + ")/(" + poly_to_string(r.den) + ")";
    }
  }
}

FieldElem derive(const FieldElem& x, std::size_t omega) {
  if (omega >= x.spec().derivation_rank())
    throw IndexOutOfRange("derivation index " + std::to_string(omega) + " outside the basis");
  using namespace detail;
  if (const auto* r = std::get_if<RatFun<Fp>>(&x.storage())) return FieldElem(rf_derive(*r));
  return FieldElem(rf_derive(std::get<RatFun<Rat>>(x.storage())));
}

std::vector<std::size_t> derivation_support(const FieldElem& x) {
  std::vector<std::size_t> s;
  for (std::size_t w = 0; w < x.spec().derivation_rank(); ++w)
    if (!derive(x, w).is_zero()) s.push_back(w);
  return s;
}

FieldElem numerator(const FieldElem& x) {
  using namespace detail;
  if (const auto* r = std::get_if<RatFun<Fp>>(&x.storage())) {
    Poly<Fp> one;
    one.c.push_back(Fp{r->den.c.front().p, 1});
    return FieldElem(RatFun<Fp>{r->num, std::move(one)});
  }
  if (const auto* r = std::get_if<RatFun<Rat>>(&x.storage())) {
    Poly<Rat> one;
    one.c.push_back(Rat(1));
    return FieldElem(RatFun<Rat>{r->num, std::move(one)});
  }
  return x;
}

FieldElem denominator(const FieldElem& x) {
  using namespace detail;
  if (const auto* r = std::get_if<RatFun<Fp>>(&x.storage())) {
    Poly<Fp> one;
    one.c.push_back(Fp{r->den.c.front().p, 1});
    return FieldElem(RatFun<Fp>{r->den, std::move(one)});
  }
  if (const auto* r = std::get_if<RatFun<Rat>>(&x.storage())) {
    Poly<Rat> one;
    one.c.push_back(Rat(1));
    return FieldElem(RatFun<Rat>{r->den, std::move(one)});
  }
  return Field(x.spec()).one();
}

// ---------------------------------------------------------------------------
// row primitivization
// ---------------------------------------------------------------------------

bool needs_primitivize(const FieldSpec& spec) { return spec.kind != FieldKind::Prime; }

namespace {

using detail::pgcd;
using detail::pdivmod;
using detail::pmul;
using detail::Poly;
using detail::RatFun;

// rationals: scale to coprime integers
FieldElem primitivize_rat_row(std::vector<FieldElem>& row) {
  mpz_class num_gcd = 0, den_lcm = 1;
  for (const FieldElem& e : row) {
    const Rat& r = std::get<Rat>(e.storage());
    if (r == 0) continue;
    num_gcd = gcd(num_gcd, mpz_class(r.get_num()));
    den_lcm = lcm(den_lcm, mpz_class(r.get_den()));
  }
  if (num_gcd == 0) return FieldElem(Rat(1));
  Rat s(den_lcm, num_gcd);
  s.canonicalize();
  FieldElem scale((Rat(s)));
  if (s == 1) return scale;
  for (FieldElem& e : row) e = e * scale;
  return scale;
}

template <class C>
FieldElem primitivize_rf_row(std::vector<FieldElem>& row) {
  Poly<C> num_gcd, den_lcm;
  for (const FieldElem& e : row) {
    const RatFun<C>& r = std::get<RatFun<C>>(e.storage());
    if (r.num.is_zero()) continue;
    num_gcd = pgcd(num_gcd, r.num);
    if (den_lcm.is_zero()) {
      den_lcm = r.den;
    } else {
      Poly<C> g = pgcd(den_lcm, r.den);
      Poly<C> q, rem;
      pdivmod(r.den, g, q, rem);
      den_lcm = pmul(den_lcm, q);
    }
  }
  Field f(row.front().spec());
  if (num_gcd.is_zero()) return f.one();
  FieldElem scale(detail::rf_make(den_lcm, num_gcd));
  for (FieldElem& e : row) e = e * scale;
  if constexpr (std::is_same_v<C, Rat>) {
    // strip the rational content of the now-polynomial entries
    mpz_class num_g = 0, den_l = 1;
    for (const FieldElem& e : row) {
      const RatFun<Rat>& r = std::get<RatFun<Rat>>(e.storage());
      for (const Rat& c : r.num.c) {
        num_g = gcd(num_g, mpz_class(c.get_num()));
        den_l = lcm(den_l, mpz_class(c.get_den()));
      }
    }
    if (num_g != 0) {
      Rat content(den_l, num_g);
      content.canonicalize();
      if (content != 1) {
        Poly<Rat> cpoly;
        cpoly.c.push_back(content);
        Poly<Rat> one;
        one.c.push_back(Rat(1));
        FieldElem cscale((RatFun<Rat>{std::move(cpoly), std::move(one)}));
        for (FieldElem& e : row) e = e * cscale;
        scale = scale * cscale;
      }
    }
  }
  return scale;
}

}  // namespace

FieldElem primitivize_row(std::vector<FieldElem>& row) {
  if (row.empty()) throw InvalidArgument("empty row");
  switch (row.front().storage().index()) {
    case 0:
      return Field(row.front().spec()).one();
    case 1:
      return primitivize_rat_row(row);
    case 2:
      return primitivize_rf_row<Fp>(row);
    default:
      return primitivize_rf_row<Rat>(row);
  }
}

namespace {

template <class C>
C poly_eval(const detail::Poly<C>& p, const C& tau, const C& one) {
  C acc = detail::czero(one);
  for (std::size_t k = p.c.size(); k-- > 0;) acc = detail::cadd(detail::cmul(acc, tau), p.c[k]);
  return acc;
}

}  // namespace

FieldElem evaluate_at(const FieldElem& x, const FieldElem& tau) {
  using namespace detail;
  if (const auto* r = std::get_if<RatFun<Fp>>(&x.storage())) {
    const Fp* tv = std::get_if<Fp>(&tau.storage());
    if (!tv || tv->p != r->den.c.front().p) throw FieldMismatch();
    Fp one{tv->p, 1};
    Fp den = poly_eval(r->den, *tv, one);
    if (den.v == 0) throw DivisionByZero();
    return FieldElem(cdiv(poly_eval(r->num, *tv, one), den));
  }
  if (const auto* r = std::get_if<RatFun<Rat>>(&x.storage())) {
    const Rat* tv = std::get_if<Rat>(&tau.storage());
    if (!tv) throw FieldMismatch();
    Rat one(1);
    Rat den = poly_eval(r->den, *tv, one);
    if (den == 0) throw DivisionByZero();
    return FieldElem(Rat(poly_eval(r->num, *tv, one) / den));
  }
  return x;
}

// ---------------------------------------------------------------------------
// Field factory
// ---------------------------------------------------------------------------

Field::Field(FieldSpec spec) : spec_(spec) {
  if (spec_.characteristic() != 0 && !is_prime_u64(spec_.p))
    throw UnsupportedField("modulus is not prime");
}

namespace {

using detail::Poly;
using detail::RatFun;

Poly<Fp> fp_poly_const(std::uint64_t p, std::uint64_t v) {
  Poly<Fp> r;
  if (v % p) r.c.push_back(Fp{p, v % p});
  return r;
}

Poly<Rat> rat_poly_const(const Rat& v) {
  Poly<Rat> r;
  if (v != 0) r.c.push_back(v);
  return r;
}

RatFun<Fp> rf_fp_const(std::uint64_t p, std::uint64_t v) {
  return RatFun<Fp>{fp_poly_const(p, v), fp_poly_const(p, 1)};
}

RatFun<Rat> rf_rat_const(const Rat& v) {
  return RatFun<Rat>{rat_poly_const(v), rat_poly_const(Rat(1))};
}

}  // namespace

FieldElem Field::zero() const {
  switch (spec_.kind) {
    case FieldKind::Prime:
      return FieldElem(Fp{spec_.p, 0});
    case FieldKind::Rationals:
      return FieldElem(Rat(0));
    case FieldKind::PrimeFunction:
      return FieldElem(rf_fp_const(spec_.p, 0));
    default:
      return FieldElem(rf_rat_const(Rat(0)));
  }
}

FieldElem Field::one() const { return from_int(1); }

FieldElem Field::from_int(long v) const {
  switch (spec_.kind) {
    case FieldKind::Prime: {
      long r = v % static_cast<long>(spec_.p);
      if (r < 0) r += static_cast<long>(spec_.p);
      return FieldElem(Fp{spec_.p, static_cast<std::uint64_t>(r)});
    }
    case FieldKind::Rationals:
      return FieldElem(Rat(v));
    case FieldKind::PrimeFunction: {
      long r = v % static_cast<long>(spec_.p);
      if (r < 0) r += static_cast<long>(spec_.p);
      return FieldElem(rf_fp_const(spec_.p, static_cast<std::uint64_t>(r)));
    }
    default:
      return FieldElem(rf_rat_const(Rat(v)));
  }
}

FieldElem Field::t() const {
  using namespace detail;
  if (!spec_.is_function_field()) throw NoDerivations();
  if (spec_.kind == FieldKind::PrimeFunction) {
    Poly<Fp> num;
    num.c = {Fp{spec_.p, 0}, Fp{spec_.p, 1}};
    return FieldElem(RatFun<Fp>{num, fp_poly_const(spec_.p, 1)});
  }
  Poly<Rat> num;
  num.c = {Rat(0), Rat(1)};
  return FieldElem(RatFun<Rat>{num, rat_poly_const(Rat(1))});
}

// ---------------------------------------------------------------------------
// element parsing
// ---------------------------------------------------------------------------

namespace {

struct Cursor {
  std::string_view s;
  std::size_t i = 0;
  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eof() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }
  char take() {
    skip_ws();
    return s[i++];
  }
};

mpz_class parse_uint_big(Cursor& c) {
  c.skip_ws();
  std::size_t start = c.i;
  while (c.i < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.i]))) ++c.i;
  if (c.i == start) throw ParseError("expected digits in '" + std::string(c.s) + "'");
  return mpz_class(std::string(c.s.substr(start, c.i - start)));
}

// term-level coefficients: uint, or uint/uint over a rationals base
template <class C>
C parse_coeff(Cursor& c, const Field& base);

template <>
Fp parse_coeff<Fp>(Cursor& c, const Field& base) {
  mpz_class n = parse_uint_big(c);
  mpz_class r = n % static_cast<unsigned long>(base.spec().p);
  return Fp{base.spec().p, r.get_ui()};
}

template <>
Rat parse_coeff<Rat>(Cursor& c, const Field&) {
  mpz_class n = parse_uint_big(c);
  if (c.peek() == '/') {
    c.take();
    mpz_class d = parse_uint_big(c);
    if (d == 0) throw ParseError("zero denominator in coefficient");
    Rat r(n, d);
    r.canonicalize();
    return r;
  }
  return Rat(n);
}

// poly := ['+'|'-'] term {('+'|'-') term};  term := coeff ['*' tpart] | tpart
template <class C>
detail::Poly<C> parse_poly(Cursor& c, const Field& base) {
  using detail::Poly;
  Poly<C> acc;
  bool first = true;
  while (true) {
    c.skip_ws();
    bool neg = false;
    if (c.peek() == '+' || c.peek() == '-') {
      neg = c.take() == '-';
    } else if (!first) {
      break;
    }
    first = false;
    C coef = [&] {
      if (std::isdigit(static_cast<unsigned char>(c.peek()))) return parse_coeff<C>(c, base);
      if (c.peek() == 't') {
        if constexpr (std::is_same_v<C, Fp>) return Fp{base.spec().p, 1 % base.spec().p};
        else return Rat(1);
      }
      throw ParseError("expected coefficient or t in '" + std::string(c.s) + "'");
    }();
    std::size_t power = 0;
    c.skip_ws();
    if (c.peek() == '*') {
      c.take();
      if (c.peek() != 't') throw ParseError("expected t after '*'");
    }
    if (c.peek() == 't') {
      c.take();
      power = 1;
      if (c.peek() == '^') {
        c.take();
        mpz_class e = parse_uint_big(c);
        if (e > 4096) throw ParseError("exponent too large");
        power = e.get_ui();
      }
    }
    Poly<C> term;
    if (!detail::cis_zero(coef)) {
      term.c.assign(power + 1, detail::czero(coef));
      term.c[power] = coef;
    }
    acc = detail::padd(acc, neg ? detail::pneg(term) : term);
    c.skip_ws();
    if (c.peek() != '+' && c.peek() != '-') break;
  }
  return acc;
}

template <class C>
detail::Poly<C> parse_poly_str(std::string_view s, const Field& base) {
  Cursor c{s, 0};
  auto p = parse_poly<C>(c, base);
  if (!c.eof()) throw ParseError("trailing characters in '" + std::string(s) + "'");
  return p;
}

// top-level "(num)/(den)" splitter; returns npos when the form is absent
std::size_t find_paren_split(std::string_view s) {
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    else if (s[i] == ')') {
      --depth;
      if (depth < 0) throw ParseError("unbalanced parentheses");
    } else if (s[i] == '/' && depth == 0) {
      return i;
    }
  }
  if (depth != 0) throw ParseError("unbalanced parentheses");
  return std::string_view::npos;
}

std::string_view strip_outer_parens(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  s = s.substr(a, b - a);
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
    int depth = 0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      if (s[i] == '(') ++depth;
      if (s[i] == ')') --depth;
      if (depth == 0) return s;  // outer parens do not match each other
    }
    return s.substr(1, s.size() - 2);
  }
  return s;
}

template <class C>
FieldElem parse_function_field_elem(std::string_view s, const Field& f) {
  std::size_t cut = find_paren_split(s);
  if (cut != std::string_view::npos) {
    std::string_view lhs = s.substr(0, cut), rhs = s.substr(cut + 1);
    // accept "(P)/(Q)" and also plain "a/b" when both sides are bare integers
    auto bare_int = [](std::string_view v) {
      std::size_t a = 0, b = v.size();
      while (a < b && std::isspace(static_cast<unsigned char>(v[a]))) ++a;
      while (b > a && std::isspace(static_cast<unsigned char>(v[b - 1]))) --b;
      if (a < b && (v[a] == '-' || v[a] == '+')) ++a;
      if (a >= b) return false;
      for (std::size_t i = a; i < b; ++i)
        if (!std::isdigit(static_cast<unsigned char>(v[i]))) return false;
      return true;
    };
    auto has_parens = [](std::string_view v) {
      for (char ch : v)
        if (ch == '(') return true;
      return false;
    };
    if ((has_parens(lhs) && has_parens(rhs)) || (bare_int(lhs) && bare_int(rhs))) {
      auto num = parse_poly_str<C>(strip_outer_parens(lhs), f);
      auto den = parse_poly_str<C>(strip_outer_parens(rhs), f);
      if (den.is_zero()) throw DivisionByZero();
      return FieldElem(detail::rf_make(std::move(num), std::move(den)));
    }
  }
  auto num = parse_poly_str<C>(s, f);
  detail::Poly<C> one;
  if constexpr (std::is_same_v<C, Fp>) one.c.push_back(Fp{f.spec().p, 1});
  else one.c.push_back(Rat(1));
  return FieldElem(detail::rf_make(std::move(num), std::move(one)));
}

}  // namespace

FieldElem Field::parse_elem(std::string_view s) const {
  try {
    switch (spec_.kind) {
      case FieldKind::Prime: {
        Cursor c{s, 0};
        bool neg = false;
        if (c.peek() == '-' || c.peek() == '+') neg = c.take() == '-';
        mpz_class n = parse_uint_big(c);
        if (!c.eof()) throw ParseError("trailing characters in '" + std::string(s) + "'");
        mpz_class r = n % static_cast<unsigned long>(spec_.p);
        std::uint64_t v = r.get_ui();
        if (neg && v) v = spec_.p - v;
        return FieldElem(Fp{spec_.p, v});
      }
      case FieldKind::Rationals: {
        Cursor c{s, 0};
        bool neg = false;
        if (c.peek() == '-' || c.peek() == '+') neg = c.take() == '-';
        mpz_class n = parse_uint_big(c);
        mpz_class d = 1;
        if (c.peek() == '/') {
          c.take();
          mpz_class dd = parse_uint_big(c);
          if (dd == 0) throw DivisionByZero();
          d = dd;
        }
        if (!c.eof()) throw ParseError("trailing characters in '" + std::string(s) + "'");
        Rat r(n, d);
        r.canonicalize();
        if (neg) r = -r;
        return FieldElem(r);
      }
      case FieldKind::PrimeFunction:
        return parse_function_field_elem<Fp>(s, *this);
      default:
        return parse_function_field_elem<Rat>(s, *this);
    }
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("bad element: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// bounded sampling
// ---------------------------------------------------------------------------

namespace {

template <class C>
detail::Poly<C> sample_poly(const Field& f, Rng& rng, const SampleParams& sp) {
  using detail::Poly;
  std::size_t deg = rng.below(sp.degree_bound + 1);
  Poly<C> r;
  for (std::size_t k = 0; k <= deg; ++k) {
    if constexpr (std::is_same_v<C, Fp>) {
      r.c.push_back(Fp{f.spec().p, rng.below(f.spec().p)});
    } else {
      Rat q(static_cast<long>(rng.small_int(sp.coeff_bound)),
            static_cast<long>(1 + rng.below(sp.coeff_bound)));
      q.canonicalize();
      r.c.push_back(q);
    }
  }
  detail::ptrim(r);
  return r;
}

template <class C>
detail::Poly<C> sample_poly_nonzero(const Field& f, Rng& rng, const SampleParams& sp) {
  for (int tries = 0; tries < 10000; ++tries) {
    auto p = sample_poly<C>(f, rng, sp);
    if (!p.is_zero()) return p;
  }
  throw Error("sampler failed to produce a nonzero polynomial");
}

}  // namespace

FieldElem Field::sample(Rng& rng, const SampleParams& sp) const {
  switch (spec_.kind) {
    case FieldKind::Prime:
      return FieldElem(Fp{spec_.p, rng.below(spec_.p)});
    case FieldKind::Rationals: {
      Rat q(static_cast<long>(rng.small_int(sp.coeff_bound)),
            static_cast<long>(1 + rng.below(sp.coeff_bound)));
      q.canonicalize();
      return FieldElem(q);
    }
    case FieldKind::PrimeFunction: {
      auto num = sample_poly<Fp>(*this, rng, sp);
      auto den = sample_poly_nonzero<Fp>(*this, rng, sp);
      return FieldElem(detail::rf_make(std::move(num), std::move(den)));
    }
    default: {
      auto num = sample_poly<Rat>(*this, rng, sp);
      auto den = sample_poly_nonzero<Rat>(*this, rng, sp);
      return FieldElem(detail::rf_make(std::move(num), std::move(den)));
    }
  }
}

FieldElem Field::sample_nonzero(Rng& rng, const SampleParams& sp) const {
  for (int tries = 0; tries < 10000; ++tries) {
    FieldElem e = sample(rng, sp);
    if (!e.is_zero()) return e;
  }
  throw Error("sampler failed to produce a nonzero element");
}

}  // namespace rootgeo
