#ifndef ROOTGEO_SLGROUP_HPP
#define ROOTGEO_SLGROUP_HPP

#include "rootgeo/linalg.hpp"

namespace rootgeo {

// An element of SL(n+1, K) with its inverse cached: the action formulas,
// the derivation cocycles and the dual action all consume g^{-1}.
class GroupElem {
 public:
  // computes the inverse by elimination and checks det == 1
  explicit GroupElem(Matrix m);
  // trusted pair: verifies m * inv == I exactly
  GroupElem(Matrix m, Matrix inv);

  const Matrix& matrix() const { return m_; }
  const Matrix& inverse() const { return inv_; }
  std::size_t size() const { return m_.rows(); }  // n+1
  const Field& field() const { return m_.field(); }

  GroupElem operator*(const GroupElem& o) const;
  GroupElem inverted() const { return GroupElem(inv_, m_); }
  bool operator==(const GroupElem& o) const { return m_ == o.m_; }

 private:
  Matrix m_, inv_;
};

// I + s*e_{i,j}, 1-based i != j. IndexError when i == j.
GroupElem transvection(const Field& f, std::size_t n_plus_1, std::size_t i, std::size_t j,
                       const FieldElem& s);

// Product of `word_length` transvections with sampled positions and
// parameters. Deterministic for a fixed rng stream.
GroupElem sample_element(const Field& f, std::size_t n_plus_1, Rng& rng, std::size_t word_length,
                         const SampleParams& sp = {});

// adjoint action a . g = g^{-1} a g
TracelessMatrix adjoint(const GroupElem& g, const TracelessMatrix& a);

// entrywise d_omega of the matrix of g; NoDerivations when Omega is empty
Matrix derive_group_elem(const GroupElem& g, std::size_t omega = 0);

// entrywise d_omega of an arbitrary matrix
Matrix derive_matrix(const Matrix& m, std::size_t omega = 0);

}  // namespace rootgeo

#endif
