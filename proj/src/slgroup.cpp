#include "rootgeo/slgroup.hpp"

namespace rootgeo {

namespace {

Matrix invert(const Matrix& m) {
  const Field& f = m.field();
  std::size_t n = m.rows();
  Matrix aug(f, n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = f.one();
  }
  Echelon e = echelon(aug, false, n);
  if (e.rank != n) throw InvalidArgument("matrix is singular");
  Matrix inv(f, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv.at(i, j) = e.rref.at(i, n + j);
  return inv;
}

}  // namespace

GroupElem::GroupElem(Matrix m) : m_(std::move(m)), inv_(m_.field(), 1, 1) {
  if (m_.rows() != m_.cols()) throw DimensionMismatch("group element must be square");
  if (det(m_) != m_.field().one()) throw InvalidArgument("determinant is not 1");
  inv_ = invert(m_);
}

GroupElem::GroupElem(Matrix m, Matrix inv) : m_(std::move(m)), inv_(std::move(inv)) {
  if (m_.rows() != m_.cols() || inv_.rows() != inv_.cols() || m_.rows() != inv_.rows())
    throw DimensionMismatch("group element must be square");
  if (m_ * inv_ != Matrix::identity(m_.field(), m_.rows()))
    throw InvalidArgument("claimed inverse is wrong");
}

GroupElem GroupElem::operator*(const GroupElem& o) const {
  return GroupElem(m_ * o.m_, o.inv_ * inv_);
}

GroupElem transvection(const Field& f, std::size_t n_plus_1, std::size_t i, std::size_t j,
                       const FieldElem& s) {
  if (i == j) throw IndexError("transvection requires i != j");
  if (i < 1 || j < 1 || i > n_plus_1 || j > n_plus_1)
    throw IndexOutOfRange("transvection index out of range");
  Matrix m = Matrix::identity(f, n_plus_1);
  Matrix inv = m;
  m.at(i - 1, j - 1) = s;
  inv.at(i - 1, j - 1) = -s;
  return GroupElem(std::move(m), std::move(inv));
}

GroupElem sample_element(const Field& f, std::size_t n_plus_1, Rng& rng, std::size_t word_length,
                         const SampleParams& sp) {
  if (word_length < 1) throw InvalidArgument("word length must be at least 1");
  Matrix m = Matrix::identity(f, n_plus_1);
  Matrix inv = m;
  for (std::size_t k = 0; k < word_length; ++k) {
    std::size_t i = 1 + rng.below(n_plus_1);
    std::size_t j = 1 + rng.below(n_plus_1 - 1);
    if (j >= i) ++j;
    FieldElem s = f.sample(rng, sp);
    GroupElem tv = transvection(f, n_plus_1, i, j, s);
    m = m * tv.matrix();
    inv = tv.inverse() * inv;
  }
  return GroupElem(std::move(m), std::move(inv));
}

TracelessMatrix adjoint(const GroupElem& g, const TracelessMatrix& a) {
  if (g.size() != a.size()) throw DimensionMismatch("adjoint size mismatch");
  return TracelessMatrix(g.inverse() * a.matrix() * g.matrix());
}

Matrix derive_matrix(const Matrix& m, std::size_t omega) {
  Matrix r(m.field(), m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r.at(i, j) = derive(m.at(i, j), omega);
  return r;
}

Matrix derive_group_elem(const GroupElem& g, std::size_t omega) {
  if (g.field().derivation_rank() == 0) throw NoDerivations();
  return derive_matrix(g.matrix(), omega);
}

}  // namespace rootgeo
