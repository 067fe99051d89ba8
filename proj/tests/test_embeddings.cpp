#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rootgeo/embeddings.hpp"

using namespace rootgeo;

namespace {

Matrix unit_row(const Field& f, std::size_t m, std::size_t k) {
  Matrix r(f, 1, m);
  r.at(0, k) = f.one();
  return r;
}

// independent evaluation of the m-coordinate: sum_i v_i d(lambda_i)
FieldElem m_coord_oracle(const Flag& f) {
  FieldElem s = f.field().zero();
  for (std::size_t i = 0; i < f.size(); ++i) s = s + f.v().at(0, i) * derive(f.lambda().at(i, 0));
  return s;
}

}  // namespace

TEST_CASE("natural embedding: base flag and rank-1 images") {
  Field f2 = Field::parse("fp:2");
  Flag base = base_flag(f2, 2);
  CHECK(natural_embed(base).matrix() == unit_matrix(f2, 3, 3, 1));

  Geometry geo = Geometry::enumerate(2, 2);
  for (const Flag& fl : geo.flags()) {
    TracelessMatrix a = natural_embed(fl);
    CHECK(rank(a.matrix()) == 1);
    CHECK(a.matrix().trace() == f2.zero());
  }
}

TEST_CASE("natural embedding scales with the representatives") {
  Field f5t = Field::parse("fp(t):5");
  Rng rng(3);
  for (int it = 0; it < 50; ++it) {
    Flag fl = sample_flag(f5t, 2, rng);
    FieldElem c = f5t.sample_nonzero(rng);
    Flag scaled(fl.v().scaled(c), fl.lambda());
    CHECK(natural_embed(scaled).matrix() == natural_embed(fl).matrix().scaled(c));
    Flag scaled2(fl.v(), fl.lambda().scaled(c));
    CHECK(natural_embed(scaled2).matrix() == natural_embed(fl).matrix().scaled(c));
  }
}

TEST_CASE("the 21 flag images over F_2 span an 8-dimensional space") {
  Geometry geo = Geometry::enumerate(2, 2);
  Matrix stack = natural_embed(geo.flags()[0]).matrix().flatten();
  for (std::size_t i = 1; i < geo.flags().size(); ++i)
    stack = stack.vstack(natural_embed(geo.flags()[i]).matrix().flatten());
  CHECK(rank(stack) == 8);  // n^2 + 2n
}

TEST_CASE("universal embedding: base flag goes to (0, e_{n+1,1})") {
  for (const char* fs : {"fp(t):5", "q(t)", "q"}) {
    Field f = Field::parse(fs);
    ExtendedVector x = universal_embed(base_flag(f, 2));
    CHECK(x.m.empty());
    CHECK(x.a.matrix() == unit_matrix(f, 3, 3, 1));
  }
}

TEST_CASE("universal embedding over a derivation-free field is (0, natural)") {
  for (const char* fs : {"q", "fp:5"}) {
    Field f = Field::parse(fs);
    Rng rng(5);
    for (int it = 0; it < 100; ++it) {
      Flag fl = sample_flag(f, 2, rng);
      ExtendedVector x = universal_embed(fl);
      CHECK(x.m.empty());
      CHECK(x.a == natural_embed(fl));
    }
  }
}

TEST_CASE("universal embedding m-coordinate on pinned flags over F_5(t)") {
  Field f = Field::parse("fp(t):5");
  FieldElem t = f.t();
  // v = (1,0,0), lambda = (0, t, -1): constant v forces m = d(v lambda) = 0
  {
    Matrix v = unit_row(f, 3, 0);
    Matrix lam(f, 3, 1);
    lam.at(1, 0) = t;
    lam.at(2, 0) = -f.one();
    ExtendedVector x = universal_embed(Flag(v, lam));
    CHECK(x.m.empty());
  }
  // v = (1, t, 0), lambda = (-t, 1, 0): m = v . d(lambda) = -1 = 4 in F_5
  {
    Matrix v(f, 1, 3);
    v.at(0, 0) = f.one();
    v.at(0, 1) = t;
    Matrix lam(f, 3, 1);
    lam.at(0, 0) = -t;
    lam.at(1, 0) = f.one();
    Flag fl(v, lam);
    ExtendedVector x = universal_embed(fl);
    REQUIRE(x.m.count(0) == 1);
    CHECK(x.m.at(0) == f.from_int(4));
    CHECK(x.m.at(0) == m_coord_oracle(fl));
  }
  // random flags agree with the independent m-coordinate expression
  Rng rng(7);
  for (int it = 0; it < 200; ++it) {
    Flag fl = sample_flag(f, 2, rng);
    ExtendedVector x = universal_embed(fl);
    FieldElem expect = m_coord_oracle(fl);
    if (expect.is_zero()) {
      CHECK(x.m.empty());
    } else {
      REQUIRE(x.m.count(0) == 1);
      CHECK(x.m.at(0) == expect);
    }
  }
}

TEST_CASE("projection onto A recovers the natural embedding") {
  for (const char* fs : {"fp(t):5", "q(t)"}) {
    Field f = Field::parse(fs);
    Rng rng(9);
    for (int it = 0; it < 200; ++it) {
      Flag fl = sample_flag(f, 2, rng);
      CHECK(universal_embed(fl).a == natural_embed(fl));
    }
  }
}

TEST_CASE("extended action: identity and derivation-free reduction") {
  Field f5t = Field::parse("fp(t):5");
  Rng rng(11);
  ExtendedVector x = sample_extended(f5t, 3, rng);
  GroupElem id(Matrix::identity(f5t, 3));
  CHECK(extended_act(x, id) == x);

  Field q = Field::parse("q");
  Rng rng2(13);
  for (int it = 0; it < 100; ++it) {
    ExtendedVector y = sample_extended(q, 3, rng2);
    GroupElem g = sample_element(q, 3, rng2, 3);
    ExtendedVector img = extended_act(y, g);
    CHECK(img.m == y.m);  // empty sum over an empty basis
    CHECK(img.a == adjoint(g, y.a));
  }
}

TEST_CASE("extended action fixes the kernel M pointwise") {
  Field f5t = Field::parse("fp(t):5");
  Rng rng(17);
  for (int it = 0; it < 100; ++it) {
    std::map<std::size_t, FieldElem> m;
    FieldElem c = f5t.sample_nonzero(rng);
    m.emplace(0, c);
    ExtendedVector x(std::move(m), TracelessMatrix(Matrix(f5t, 3, 3)));
    GroupElem g = sample_element(f5t, 3, rng, 3);
    ExtendedVector img = extended_act(x, g);
    CHECK(img == x);
  }
}

TEST_CASE("the trace term reduces to v . d(lambda) on embedded flags") {
  // the identity that makes the lifted embedding exactly equivariant:
  // Tr(g d(g^{-1}) (lambda v)) = (v g) . d(g^{-1} lambda) - v . d(lambda)
  // specializes on the base flag to Tr(g d(g^{-1}) e_{n+1,1}) = v . d(lambda)
  // for v = e_1 g, lambda = g^{-1} eta_{n+1}
  Field f = Field::parse("fp(t):5");
  Rng rng(201);
  Matrix e1(f, 1, 3), eta(f, 3, 1);
  e1.at(0, 0) = f.one();
  eta.at(2, 0) = f.one();
  TracelessMatrix e31(unit_matrix(f, 3, 3, 1));
  for (int it = 0; it < 100; ++it) {
    GroupElem g = sample_element(f, 3, rng, 3);
    Matrix v = e1 * g.matrix();
    Matrix lam = g.inverse() * eta;
    FieldElem lhs = (g.matrix() * derive_matrix(g.inverse()) * e31.matrix()).trace();
    FieldElem rhs = (v * derive_matrix(lam)).at(0, 0);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("the transposed-order trace term would not define an action") {
  // replacing Tr(g d_w(g^{-1}) a) by Tr(g^{-1} d_w(g) a) in the m-part breaks
  // the right-action law, so the order of g and g^{-1} is load-bearing
  Field f = Field::parse("fp(t):5");
  auto wrong_act = [&](const ExtendedVector& x, const GroupElem& g) {
    std::map<std::size_t, FieldElem> m = x.m;
    FieldElem c = (g.inverse() * derive_matrix(g.matrix()) * x.a.matrix()).trace();
    if (!c.is_zero()) {
      auto [it, fresh] = m.emplace(0, c);
      if (!fresh) {
        it->second = it->second + c;
        if (it->second.is_zero()) m.erase(it);
      }
    }
    return ExtendedVector(std::move(m), adjoint(g, x.a));
  };
  Rng rng(203);
  bool violated = false;
  for (int it = 0; it < 50 && !violated; ++it) {
    ExtendedVector x = sample_extended(f, 3, rng);
    GroupElem g1 = sample_element(f, 3, rng, 3);
    GroupElem g2 = sample_element(f, 3, rng, 3);
    violated = !(wrong_act(wrong_act(x, g1), g2) == wrong_act(x, g1 * g2));
  }
  CHECK(violated);
}

TEST_CASE("extended action satisfies the right-action law (200 triples)") {
  for (const char* fs : {"fp(t):5", "q(t)"}) {
    Field f = Field::parse(fs);
    VerifyOptions opt;
    opt.samples = 200;
    opt.seed = 19;
    CheckReport rep = check_action_law(f, 2, opt);
    CHECK(rep.pass);
    CHECK(rep.samples_run == 200);
  }
}

TEST_CASE("natural embedding is equivariant on the nose") {
  Field f5t = Field::parse("fp(t):5");
  Rng rng(23);
  for (int it = 0; it < 200; ++it) {
    Flag fl = sample_flag(f5t, 2, rng);
    GroupElem g = sample_element(f5t, 3, rng, 3);
    CHECK(natural_embed(act_on_flag(fl, g)) == adjoint(g, natural_embed(fl)));
  }
}

TEST_CASE("cover embedding equivariance: 500 pairs over F_5(t), n=2") {
  VerifyOptions opt;
  opt.samples = 500;
  opt.seed = 29;
  CheckReport rep = check_equivariance(Field::parse("fp(t):5"), 2, opt);
  CHECK(rep.pass);
  CHECK(rep.samples_run == 500);
}

TEST_CASE("cover embedding equivariance: 200 pairs over Q(t), n=3") {
  VerifyOptions opt;
  opt.samples = 200;
  opt.seed = 31;
  opt.word_length = 2;
  CheckReport rep = check_equivariance(Field::parse("q(t)"), 3, opt);
  CHECK(rep.pass);
  CHECK(rep.samples_run == 200);
}

TEST_CASE("equivariance with the identity is trivial") {
  Field f = Field::parse("fp(t):5");
  Rng rng(37);
  Flag fl = sample_flag(f, 2, rng);
  GroupElem id(Matrix::identity(f, 3));
  CHECK(universal_embed(act_on_flag(fl, id)) == extended_act(universal_embed(fl), id));
}

TEST_CASE("collinearity: exhaustive for the natural embedding over F_2") {
  VerifyOptions opt;
  CheckReport rep = check_collinearity(Field::parse("fp:2"), 2, /*use_universal=*/false, opt);
  CHECK(rep.pass);
  CHECK(rep.details.at("lines_checked").get<std::size_t>() == 14);
}

TEST_CASE("collinearity: exhaustive over F_3, universal route") {
  VerifyOptions opt;
  CheckReport rep = check_collinearity(Field::parse("fp:3"), 2, true, opt);
  CHECK(rep.pass);
  CHECK(rep.details.at("lines_checked").get<std::size_t>() == 26);
}

TEST_CASE("collinearity: 200 sampled lines over F_5(t)") {
  VerifyOptions opt;
  opt.samples = 100;  // per family
  opt.seed = 41;
  CheckReport rep = check_collinearity(Field::parse("fp(t):5"), 2, true, opt);
  CHECK(rep.pass);
  CHECK(rep.details.at("lines_checked").get<std::size_t>() == 200);
}

TEST_CASE("degenerate input: equal flags give a rank-1 span") {
  Field f = Field::parse("fp(t):5");
  Rng rng(43);
  Flag fl = sample_flag(f, 2, rng);
  Matrix stack = universal_embed(fl).coords().vstack(universal_embed(fl).coords());
  CHECK(rank(stack) == 1);
}

TEST_CASE("dimension saturation: exhaustive finite fields") {
  DimensionOptions opt;
  DimensionReport r2 = dimension_report(Field::parse("fp:2"), 2, opt);
  CHECK(r2.dimension == 8);
  CHECK(r2.reached_ceiling);
  DimensionReport r3 = dimension_report(Field::parse("fp:3"), 2, opt);
  CHECK(r3.dimension == 8);
}

TEST_CASE("dimension saturation: F_5(t) n=2 reaches 9, Q n=2 reaches 8") {
  DimensionOptions opt;
  opt.seed = 47;
  DimensionReport r = dimension_report(Field::parse("fp(t):5"), 2, opt);
  CHECK(r.dimension == 9);  // drk + n^2 + 2n = 1 + 8
  CHECK(r.reached_ceiling);
  DimensionReport rq = dimension_report(Field::parse("q"), 2, opt);
  CHECK(rq.dimension == 8);
  CHECK(rq.reached_ceiling);
}

TEST_CASE("extended vector coordinate layout") {
  Field f = Field::parse("fp(t):5");
  Rng rng(53);
  ExtendedVector x = sample_extended(f, 3, rng);
  Matrix c = x.coords();
  REQUIRE(c.cols() == 1 + 9);
  auto it = x.m.find(0);
  FieldElem m0 = it == x.m.end() ? f.zero() : it->second;
  CHECK(c.at(0, 0) == m0);
  CHECK(c.at(0, 1) == x.a.matrix().at(0, 0));
  CHECK(c.at(0, 8) == x.a.matrix().at(2, 1));
  CHECK(c.at(0, 9) == x.a.matrix().at(2, 2));
}
