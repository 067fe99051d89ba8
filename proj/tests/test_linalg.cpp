#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "rootgeo/linalg.hpp"

using namespace rootgeo;

namespace {

Matrix random_matrix(const Field& f, std::size_t r, std::size_t c, Rng& rng,
                     const SampleParams& sp = {}) {
  Matrix m(f, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.at(i, j) = f.sample(rng, sp);
  return m;
}

}  // namespace

TEST_CASE("rank of the identity") {
  Field f5 = Field::parse("fp:5");
  CHECK(rank(Matrix::identity(f5, 3)) == 3);
}

TEST_CASE("kernel of (1 1) over Q is span{(1,-1)}") {
  Field q = Field::parse("q");
  Matrix m(q, 1, 2);
  m.at(0, 0) = q.one();
  m.at(0, 1) = q.one();
  Subspace k = kernel(m);
  Matrix gen(q, 1, 2);
  gen.at(0, 0) = q.one();
  gen.at(0, 1) = -q.one();
  CHECK(k == Subspace::span(gen));
  CHECK(k.dim() == 1);
}

TEST_CASE("rank + kernel dimension = columns on random matrices") {
  for (const char* fs : {"fp:5", "q", "fp(t):5", "q(t)"}) {
    Field f = Field::parse(fs);
    Rng rng(21);
    SampleParams sp;
    sp.degree_bound = 1;
    for (int it = 0; it < 40; ++it) {
      std::size_t r = 1 + rng.below(5), c = 1 + rng.below(5);
      Matrix m = random_matrix(f, r, c, rng, sp);
      CHECK(rank(m) + kernel(m).dim() == c);
    }
  }
}

TEST_CASE("rank agrees with an independent machine-integer echelon over F_p") {
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL}) {
    Field f(FieldSpec{FieldKind::Prime, p});
    Rng rng(5 + p);
    for (int it = 0; it < 60; ++it) {
      std::size_t r = 1 + rng.below(7), c = 1 + rng.below(7);
      Matrix m(f, r, c);
      std::vector<std::vector<std::uint64_t>> raw(r, std::vector<std::uint64_t>(c));
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
          raw[i][j] = rng.below(p);
          m.at(i, j) = f.from_int(static_cast<long>(raw[i][j]));
        }
      CHECK(rank(m) == modp_rank(p, raw));
    }
  }
}

TEST_CASE("echelon transform replays the reduction") {
  Field qt = Field::parse("q(t)");
  Rng rng(31);
  SampleParams sp;
  sp.degree_bound = 1;
  for (int it = 0; it < 10; ++it) {
    Matrix m = random_matrix(qt, 3, 4, rng, sp);
    Echelon e = echelon(m, true);
    CHECK(e.transform * m == e.rref);
  }
}

TEST_CASE("solve returns exact solutions or recheckable certificates") {
  for (const char* fs : {"fp:5", "q", "fp(t):5", "q(t)"}) {
    Field f = Field::parse(fs);
    Rng rng(37);
    SampleParams sp;
    sp.degree_bound = 1;
    int inconsistent_seen = 0;
    for (int it = 0; it < 60; ++it) {
      std::size_t r = 1 + rng.below(4), c = 1 + rng.below(4);
      Matrix m = random_matrix(f, r, c, rng, sp);
      Matrix b = random_matrix(f, r, 1, rng, sp);
      SolveResult res = solve(m, b);
      if (res.consistent()) {
        CHECK(m * *res.solution == b);
      } else {
        ++inconsistent_seen;
        const Matrix& y = *res.certificate;
        CHECK((y * m).is_zero());
        CHECK_FALSE((y * b).at(0, 0).is_zero());
      }
    }
    CHECK(inconsistent_seen > 0);  // random rectangular systems do go inconsistent
  }
}

TEST_CASE("solve on a pinned inconsistent system") {
  Field q = Field::parse("q");
  Matrix m(q, 2, 2);
  m.at(0, 0) = q.one();
  m.at(1, 0) = q.one();
  Matrix b(q, 2, 1);
  b.at(1, 0) = q.one();
  SolveResult res = solve(m, b);
  REQUIRE_FALSE(res.consistent());
  CHECK(((*res.certificate) * m).is_zero());
  CHECK_FALSE(((*res.certificate) * b).at(0, 0).is_zero());
}

TEST_CASE("Tr(XY) = Tr(YX) on random square matrices") {
  for (const char* fs : {"fp:5", "q(t)"}) {
    Field f = Field::parse(fs);
    Rng rng(41);
    SampleParams sp;
    sp.degree_bound = 1;
    for (int it = 0; it < 50; ++it) {
      Matrix x = random_matrix(f, 3, 3, rng, sp), y = random_matrix(f, 3, 3, rng, sp);
      CHECK((x * y).trace() == (y * x).trace());
    }
  }
}

TEST_CASE("trace pairing: scalar shifts are invisible") {
  Field f5t = Field::parse("fp(t):5");
  Rng rng(43);
  // Tr(I a) = 0 for traceless a
  for (int it = 0; it < 30; ++it) {
    Matrix raw = random_matrix(f5t, 3, 3, rng);
    FieldElem d = raw.trace();
    raw.at(2, 2) = raw.at(2, 2) - d;  // force traceless
    TracelessMatrix a(raw);
    CHECK(trace_pair(Matrix::identity(f5t, 3), a) == f5t.zero());
    Matrix b = random_matrix(f5t, 3, 3, rng);
    Matrix shifted = b + Matrix::identity(f5t, 3).scaled(f5t.from_int(3));
    CHECK(trace_pair(b, a) == trace_pair(shifted, a));
  }
  // unit matrices pair to 1
  TracelessMatrix e21(unit_matrix(f5t, 3, 2, 1));
  CHECK(trace_pair(unit_matrix(f5t, 3, 1, 2), e21) == f5t.one());
}

TEST_CASE("traceless constructor rejects nonzero trace") {
  Field q = Field::parse("q");
  CHECK_THROWS_AS(TracelessMatrix(Matrix::identity(q, 3)), InvalidArgument);
  CHECK_THROWS_AS(trace_pair(Matrix::identity(q, 2), TracelessMatrix(Matrix(q, 3, 3))),
                  DimensionMismatch);
}

TEST_CASE("determinants: triangular, singular, multiplicative") {
  Field qt = Field::parse("q(t)");
  Matrix u = Matrix::identity(qt, 3);
  u.at(0, 1) = qt.t();
  CHECK(det(u) == qt.one());
  Matrix s(qt, 2, 2);
  s.at(0, 0) = qt.one();
  s.at(1, 0) = qt.one();
  CHECK(det(s) == qt.zero());
  Rng rng(47);
  SampleParams sp;
  sp.degree_bound = 1;
  for (int it = 0; it < 15; ++it) {
    Matrix a = random_matrix(qt, 3, 3, rng, sp), b = random_matrix(qt, 3, 3, rng, sp);
    CHECK(det(a * b) == det(a) * det(b));
  }
}

TEST_CASE("matrix text format round-trips") {
  Field f5t = Field::parse("fp(t):5");
  Rng rng(53);
  Matrix m = random_matrix(f5t, 3, 4, rng);
  CHECK(Matrix::from_text(f5t, m.to_text()) == m);
  CHECK_THROWS_AS(Matrix::from_text(f5t, ""), ParseError);
  CHECK_THROWS_AS(Matrix::from_text(f5t, "1 2\n3"), ParseError);
}

TEST_CASE("span builder agrees with batch rank") {
  Field q = Field::parse("q");
  Rng rng(59);
  for (int it = 0; it < 20; ++it) {
    std::size_t rows = 1 + rng.below(8);
    Matrix m = random_matrix(q, rows, 5, rng);
    SpanBuilder sb(q, 5);
    for (std::size_t i = 0; i < rows; ++i) sb.insert(m.row(i));
    CHECK(sb.dim() == rank(m));
  }
}

TEST_CASE("dimension mismatches throw") {
  Field q = Field::parse("q");
  Matrix a(q, 2, 3), b(q, 3, 3);
  CHECK_THROWS_AS(a + b, DimensionMismatch);
  CHECK_THROWS_AS(b * a * b, DimensionMismatch);
  CHECK_THROWS_AS(a.trace(), DimensionMismatch);
  CHECK_THROWS_AS(det(a), DimensionMismatch);
}
