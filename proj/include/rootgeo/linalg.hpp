#ifndef ROOTGEO_LINALG_HPP
#define ROOTGEO_LINALG_HPP

#include <optional>
#include <string>
#include <vector>

#include "rootgeo/field.hpp"

namespace rootgeo {

// Dense exact matrix over one of the configured fields. Row-major.
class Matrix {
 public:
  Matrix(const Field& f, std::size_t rows, std::size_t cols);
  static Matrix identity(const Field& f, std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Field& field() const { return field_; }

  FieldElem& at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  const FieldElem& at(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator*(const Matrix& o) const;
  Matrix operator-() const;
  Matrix scaled(const FieldElem& k) const;
  Matrix transpose() const;
  FieldElem trace() const;  // DimensionMismatch unless square
  bool operator==(const Matrix& o) const;
  bool operator!=(const Matrix& o) const { return !(*this == o); }
  bool is_zero() const;

  Matrix row(std::size_t i) const;
  Matrix col(std::size_t j) const;
  Matrix vstack(const Matrix& below) const;
  // 1 x (rows*cols) row vector of all entries
  Matrix flatten() const;

  // text format: one row per line, entries whitespace-separated
  std::string to_text() const;
  static Matrix from_text(const Field& f, std::string_view text);

 private:
  std::size_t rows_, cols_;
  Field field_;
  std::vector<FieldElem> e_;
};

// Reduced row echelon form. `transform` (when requested) collects the row
// operations: transform * input == rref, with transform square invertible.
struct Echelon {
  Matrix rref;
  Matrix transform;
  bool has_transform = false;
  std::vector<std::size_t> pivot_cols;
  std::size_t rank = 0;
};

Echelon echelon(const Matrix& m, bool want_transform = false,
                std::size_t pivot_col_limit = static_cast<std::size_t>(-1));

std::size_t rank(const Matrix& m);
FieldElem det(const Matrix& m);  // DimensionMismatch unless square

// Subspace of row vectors in canonical (RREF) form, so equality of subspaces
// is equality of representations.
class Subspace {
 public:
  static Subspace span(const Matrix& generators_as_rows);
  static Subspace zero(const Field& f, std::size_t ambient);

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return is_zero_ ? 0 : basis_.rows(); }
  const Matrix& basis() const { return basis_; }

  bool contains(const Matrix& row_vector) const;
  // reduce a row vector against the basis (residual after elimination)
  Matrix reduce(Matrix row_vector) const;
  bool operator==(const Subspace& o) const;

 private:
  Subspace(std::size_t ambient, Matrix basis) : ambient_(ambient), basis_(std::move(basis)) {}
  std::size_t ambient_;
  Matrix basis_;  // RREF, exactly dim() rows (a single zero row when dim() == 0)
  bool is_zero_ = false;
};

// Right kernel {x : m x = 0}, x returned as rows of the basis.
Subspace kernel(const Matrix& m);

// One exact solution of m x = b (x, b column vectors), or a certificate
// row combination y with y m = 0 and y b != 0 proving inconsistency.
struct SolveResult {
  std::optional<Matrix> solution;     // cols x 1
  std::optional<Matrix> certificate;  // 1 x rows
  bool consistent() const { return solution.has_value(); }
};
SolveResult solve(const Matrix& m, const Matrix& b);

// Incremental RREF span accumulator (dimension saturation loops).
class SpanBuilder {
 public:
  SpanBuilder(const Field& f, std::size_t ambient);
  // returns true if the vector enlarged the span
  bool insert(Matrix row_vector);
  std::size_t dim() const { return rows_.size(); }
  std::size_t ambient_dim() const { return ambient_; }

 private:
  Field field_;
  std::size_t ambient_;
  std::vector<Matrix> rows_;          // RREF rows
  std::vector<std::size_t> pivots_;   // pivot column per row
};

// Traceless square matrix: an element of the adjoint module.
class TracelessMatrix {
 public:
  explicit TracelessMatrix(Matrix m);
  const Matrix& matrix() const { return m_; }
  std::size_t size() const { return m_.rows(); }

  TracelessMatrix operator+(const TracelessMatrix& o) const { return TracelessMatrix(m_ + o.m_); }
  TracelessMatrix operator-(const TracelessMatrix& o) const { return TracelessMatrix(m_ - o.m_); }
  TracelessMatrix scaled(const FieldElem& k) const { return TracelessMatrix(m_.scaled(k)); }
  bool operator==(const TracelessMatrix& o) const { return m_ == o.m_; }
  bool operator!=(const TracelessMatrix& o) const { return !(*this == o); }

 private:
  Matrix m_;
};

// Tr(b * a); invariant under b -> b + c*I because Tr(a) = 0, so it evaluates
// the functional of A* represented by the coset b + <I>.
FieldElem trace_pair(const Matrix& b, const TracelessMatrix& a);

// e_{i,j} unit matrix, 1-based indices
Matrix unit_matrix(const Field& f, std::size_t n, std::size_t i, std::size_t j);

}  // namespace rootgeo

#endif
