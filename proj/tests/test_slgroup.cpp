#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rootgeo/embeddings.hpp"
#include "rootgeo/slgroup.hpp"

using namespace rootgeo;

TEST_CASE("transvection basics") {
  Field f5t = Field::parse("fp(t):5");
  FieldElem t = f5t.t();

  CHECK(transvection(f5t, 3, 1, 2, f5t.zero()).matrix() == Matrix::identity(f5t, 3));

  GroupElem tv = transvection(f5t, 3, 1, 2, t);
  CHECK(tv.inverse().at(0, 1) == -t);
  CHECK(tv.matrix() * tv.inverse() == Matrix::identity(f5t, 3));

  FieldElem s = (t + f5t.one()) / t;
  CHECK(det(transvection(f5t, 3, 2, 1, s).matrix()) == f5t.one());

  CHECK_THROWS_AS(transvection(f5t, 3, 2, 2, t), IndexError);
  CHECK_THROWS_AS(transvection(f5t, 3, 0, 2, t), IndexOutOfRange);
  CHECK_THROWS_AS(transvection(f5t, 3, 1, 4, t), IndexOutOfRange);
}

TEST_CASE("group element constructors validate") {
  Field q = Field::parse("q");
  Matrix two = Matrix::identity(q, 2).scaled(q.from_int(2));
  CHECK_THROWS_AS(GroupElem{two}, InvalidArgument);  // det = 4
  Matrix id = Matrix::identity(q, 2);
  CHECK_THROWS_AS(GroupElem(id, two), InvalidArgument);  // wrong inverse
  GroupElem ok(id);
  CHECK(ok.inverse() == id);
}

TEST_CASE("sampled elements") {
  Field f5 = Field::parse("fp:5");
  Rng rng0(1);
  CHECK_THROWS_AS(sample_element(f5, 3, rng0, 0), InvalidArgument);

  // L = 1 gives a single transvection: identity off-diagonal except one slot
  for (int it = 0; it < 20; ++it) {
    GroupElem g = sample_element(f5, 3, rng0, 1);
    std::size_t nonzero_off_diag = 0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        if (i == j) {
          CHECK(g.matrix().at(i, j) == f5.one());
        } else if (!g.matrix().at(i, j).is_zero()) {
          ++nonzero_off_diag;
        }
      }
    CHECK(nonzero_off_diag <= 1);
  }

  // regression pin: seed 42, word length 3, SL(3, F_5)
  Rng rng42(42);
  GroupElem g = sample_element(f5, 3, rng42, 3);
  CHECK(g.matrix().to_text() == "1 2 0\n0 1 3\n0 0 1\n");

  // determinant 1 across fields
  for (const char* fs : {"fp:5", "q", "fp(t):5", "q(t)"}) {
    Field f = Field::parse(fs);
    Rng rng(3);
    for (int it = 0; it < 10; ++it)
      CHECK(det(sample_element(f, 3, rng, 4).matrix()) == f.one());
  }
}

TEST_CASE("adjoint action") {
  Field f5t = Field::parse("fp(t):5");
  Rng rng(5);
  TracelessMatrix a = sample_traceless(f5t, 3, rng);
  GroupElem id(Matrix::identity(f5t, 3));
  CHECK(adjoint(id, a) == a);

  // right-action law on 200 random triples, exact
  for (int it = 0; it < 200; ++it) {
    TracelessMatrix x = sample_traceless(f5t, 3, rng);
    GroupElem g1 = sample_element(f5t, 3, rng, 3);
    GroupElem g2 = sample_element(f5t, 3, rng, 3);
    CHECK(adjoint(g2, adjoint(g1, x)) == adjoint(g1 * g2, x));
    CHECK(adjoint(g1, x).matrix().trace() == f5t.zero());
  }
}

TEST_CASE("stabilizer of <e_{n+1,1}> scales it in the adjoint action") {
  Field f5 = Field::parse("fp:5");
  const std::size_t np1 = 3;
  TracelessMatrix e31(unit_matrix(f5, np1, np1, 1));
  Rng rng(7);
  // transvections with i != 1 and j != n+1 stabilize <e_{n+1,1}>
  for (int it = 0; it < 100; ++it) {
    Matrix m = Matrix::identity(f5, np1);
    Matrix inv = m;
    for (int w = 0; w < 3; ++w) {
      std::size_t i = 2 + rng.below(np1 - 1);
      std::size_t j = 1 + rng.below(np1 - 1);
      if (i == j) continue;
      GroupElem tv = transvection(f5, np1, i, j, f5.sample(rng));
      m = m * tv.matrix();
      inv = tv.inverse() * inv;
    }
    GroupElem g(m, inv);
    TracelessMatrix image = adjoint(g, e31);
    // image = c * e31 for some scalar c
    FieldElem c = image.matrix().at(np1 - 1, 0);
    CHECK(image.matrix() == e31.matrix().scaled(c));
  }
}

TEST_CASE("entrywise derivation of group elements") {
  Field f5t = Field::parse("fp(t):5");
  FieldElem t = f5t.t();
  GroupElem id(Matrix::identity(f5t, 3));
  CHECK(derive_group_elem(id).is_zero());
  CHECK(derive_group_elem(transvection(f5t, 3, 1, 2, t)) == unit_matrix(f5t, 3, 1, 2));

  Field q = Field::parse("q");
  GroupElem idq(Matrix::identity(q, 3));
  CHECK_THROWS_AS(derive_group_elem(idq), NoDerivations);

  // Leibniz on 200 random pairs
  Rng rng(11);
  for (int it = 0; it < 200; ++it) {
    GroupElem g1 = sample_element(f5t, 3, rng, 2);
    GroupElem g2 = sample_element(f5t, 3, rng, 2);
    CHECK(derive_group_elem(g1 * g2) ==
          derive_group_elem(g1) * g2.matrix() + g1.matrix() * derive_group_elem(g2));
  }

  // d(g^{-1}) = -g^{-1} d(g) g^{-1}, forced by d(g g^{-1}) = 0
  for (int it = 0; it < 100; ++it) {
    GroupElem g = sample_element(f5t, 3, rng, 3);
    Matrix lhs = derive_matrix(g.inverse());
    Matrix rhs = -(g.inverse() * derive_group_elem(g) * g.inverse());
    CHECK(lhs == rhs);
  }
}
