#include "rootgeo/linalg.hpp"

#include <sstream>

namespace rootgeo {

Matrix::Matrix(const Field& f, std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), field_(f), e_(rows * cols, f.zero()) {
  if (rows == 0 || cols == 0) throw DimensionMismatch("matrix dimensions must be positive");
}

Matrix Matrix::identity(const Field& f, std::size_t n) {
  Matrix m(f, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = f.one();
  return m;
}

namespace {
void check_shape(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("matrix shapes differ");
}
}  // namespace

Matrix Matrix::operator+(const Matrix& o) const {
  check_shape(*this, o);
  Matrix r = *this;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j) + o.at(i, j);
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  check_shape(*this, o);
  Matrix r = *this;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j) - o.at(i, j);
  return r;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) throw DimensionMismatch("inner dimensions differ");
  Matrix r(field_, rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      if (at(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        if (o.at(k, j).is_zero()) continue;
        r.at(i, j) = r.at(i, j) + at(i, k) * o.at(k, j);
      }
    }
  return r;
}

Matrix Matrix::operator-() const {
  Matrix r = *this;
  for (auto& x : r.e_) x = -x;
  return r;
}

Matrix Matrix::scaled(const FieldElem& k) const {
  Matrix r = *this;
  for (auto& x : r.e_) x = x * k;
  return r;
}

Matrix Matrix::transpose() const {
  Matrix r(field_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
  return r;
}

FieldElem Matrix::trace() const {
  if (rows_ != cols_) throw DimensionMismatch("trace of a non-square matrix");
  FieldElem s = field_.zero();
  for (std::size_t i = 0; i < rows_; ++i) s = s + at(i, i);
  return s;
}

bool Matrix::operator==(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) return false;
  for (std::size_t i = 0; i < e_.size(); ++i)
    if (e_[i] != o.e_[i]) return false;
  return true;
}

bool Matrix::is_zero() const {
  for (const auto& x : e_)
    if (!x.is_zero()) return false;
  return true;
}

Matrix Matrix::row(std::size_t i) const {
  Matrix r(field_, 1, cols_);
  for (std::size_t j = 0; j < cols_; ++j) r.at(0, j) = at(i, j);
  return r;
}

Matrix Matrix::col(std::size_t j) const {
  Matrix r(field_, rows_, 1);
  for (std::size_t i = 0; i < rows_; ++i) r.at(i, 0) = at(i, j);
  return r;
}

Matrix Matrix::vstack(const Matrix& below) const {
  if (cols_ != below.cols_) throw DimensionMismatch("vstack column counts differ");
  Matrix r(field_, rows_ + below.rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
  for (std::size_t i = 0; i < below.rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.at(rows_ + i, j) = below.at(i, j);
  return r;
}

Matrix Matrix::flatten() const {
  Matrix r(field_, 1, rows_ * cols_);
  for (std::size_t i = 0; i < rows_ * cols_; ++i) r.at(0, i) = e_[i];
  return r;
}

std::string Matrix::to_text() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j) out << ' ';
      out << at(i, j).to_string();
    }
    out << '\n';
  }
  return out.str();
}

Matrix Matrix::from_text(const Field& f, std::string_view text) {
  std::vector<std::vector<FieldElem>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<FieldElem> row;
    std::string tok;
    while (ls >> tok) row.push_back(f.parse_elem(tok));
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty matrix text");
  Matrix m(f, rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw ParseError("ragged matrix text");
    for (std::size_t j = 0; j < rows[i].size(); ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

// ---------------------------------------------------------------------------
// elimination
// ---------------------------------------------------------------------------

namespace {

// Over Q and Q(t) pick the nonzero entry of smallest representation in the
// column to damp coefficient growth; otherwise first nonzero.
bool prefer_small_pivots(const Field& f) {
  return f.spec().kind == FieldKind::Rationals || f.spec().kind == FieldKind::RationalsFunction;
}

}  // namespace

Echelon echelon(const Matrix& m, bool want_transform, std::size_t pivot_col_limit) {
  const Field& f = m.field();
  Matrix a = m;
  Matrix u = Matrix::identity(f, m.rows());
  const bool small = prefer_small_pivots(f);
  const bool prim = needs_primitivize(f.spec());

  // keep rows in primitive form: exact row scalings that stop the entries of
  // the elimination from swelling over Q, F_p(t) and Q(t)
  auto primitivize = [&](std::size_t i) {
    if (!prim) return;
    std::vector<FieldElem> row;
    row.reserve(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(a.at(i, j));
    FieldElem s = primitivize_row(row);
    if (s.is_one()) return;
    for (std::size_t j = 0; j < m.cols(); ++j) a.at(i, j) = row[j];
    if (want_transform)
      for (std::size_t j = 0; j < m.rows(); ++j) u.at(i, j) = u.at(i, j) * s;
  };
  for (std::size_t i = 0; i < m.rows(); ++i) primitivize(i);

  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  std::size_t limit = std::min(pivot_col_limit, m.cols());
  for (std::size_t c = 0; c < limit && r < m.rows(); ++c) {
    std::size_t best = m.rows();
    std::size_t best_size = 0;
    for (std::size_t i = r; i < m.rows(); ++i) {
      if (a.at(i, c).is_zero()) continue;
      if (!small) {
        best = i;
        break;
      }
      std::size_t sz = a.at(i, c).repr_size();
      if (best == m.rows() || sz < best_size) {
        best = i;
        best_size = sz;
      }
    }
    if (best == m.rows()) continue;
    if (best != r) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(a.at(r, j), a.at(best, j));
      if (want_transform)
        for (std::size_t j = 0; j < m.rows(); ++j) std::swap(u.at(r, j), u.at(best, j));
    }
    // eliminate with unnormalized pivot rows; unit pivots are restored at the
    // end so the result is still the canonical reduced echelon form
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || a.at(i, c).is_zero()) continue;
      if (prim) {
        // cross-multiplied update: entries stay denominator-free, so the
        // only gcd work is the one primitivize pass per row operation
        FieldElem p = a.at(r, c), e = a.at(i, c);
        for (std::size_t j = 0; j < m.cols(); ++j)
          a.at(i, j) = p * a.at(i, j) - e * a.at(r, j);
        if (want_transform)
          for (std::size_t j = 0; j < m.rows(); ++j)
            u.at(i, j) = p * u.at(i, j) - e * u.at(r, j);
        primitivize(i);
      } else {
        FieldElem fct = a.at(i, c) / a.at(r, c);
        for (std::size_t j = 0; j < m.cols(); ++j) a.at(i, j) = a.at(i, j) - fct * a.at(r, j);
        if (want_transform)
          for (std::size_t j = 0; j < m.rows(); ++j) u.at(i, j) = u.at(i, j) - fct * u.at(r, j);
      }
    }
    pivots.push_back(c);
    ++r;
  }
  for (std::size_t k = 0; k < r; ++k) {
    FieldElem inv = a.at(k, pivots[k]).inv();
    if (inv.is_one()) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) a.at(k, j) = a.at(k, j) * inv;
    if (want_transform)
      for (std::size_t j = 0; j < m.rows(); ++j) u.at(k, j) = u.at(k, j) * inv;
  }
  return Echelon{std::move(a), std::move(u), want_transform, std::move(pivots), r};
}

std::size_t rank(const Matrix& m) { return echelon(m).rank; }

FieldElem det(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("determinant of a non-square matrix");
  const Field& f = m.field();
  Matrix a = m;
  bool flip = false;
  const bool small = prefer_small_pivots(f);
  for (std::size_t c = 0; c < m.cols(); ++c) {
    std::size_t best = m.rows();
    std::size_t best_size = 0;
    for (std::size_t i = c; i < m.rows(); ++i) {
      if (a.at(i, c).is_zero()) continue;
      if (!small) {
        best = i;
        break;
      }
      std::size_t sz = a.at(i, c).repr_size();
      if (best == m.rows() || sz < best_size) {
        best = i;
        best_size = sz;
      }
    }
    if (best == m.rows()) return f.zero();
    if (best != c) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(a.at(c, j), a.at(best, j));
      flip = !flip;
    }
    for (std::size_t i = c + 1; i < m.rows(); ++i) {
      if (a.at(i, c).is_zero()) continue;
      FieldElem fct = a.at(i, c) / a.at(c, c);
      for (std::size_t j = c; j < m.cols(); ++j) a.at(i, j) = a.at(i, j) - fct * a.at(c, j);
    }
  }
  FieldElem d = f.one();
  for (std::size_t i = 0; i < m.rows(); ++i) d = d * a.at(i, i);
  return flip ? -d : d;
}

// ---------------------------------------------------------------------------
// subspaces
// ---------------------------------------------------------------------------

Subspace Subspace::span(const Matrix& generators) {
  Echelon e = echelon(generators);
  const Field& f = generators.field();
  if (e.rank == 0) return zero(f, generators.cols());
  Matrix basis(f, e.rank, generators.cols());
  for (std::size_t i = 0; i < e.rank; ++i)
    for (std::size_t j = 0; j < generators.cols(); ++j) basis.at(i, j) = e.rref.at(i, j);
  return Subspace(generators.cols(), std::move(basis));
}

Subspace Subspace::zero(const Field& f, std::size_t ambient) {
  // represented by a single zero row; dim() special-cases it
  Matrix b(f, 1, ambient);
  Subspace s(ambient, std::move(b));
  s.is_zero_ = true;
  return s;
}

Matrix Subspace::reduce(Matrix v) const {
  if (v.cols() != ambient_ || v.rows() != 1) throw DimensionMismatch("reduce expects a 1 x ambient row");
  if (is_zero_) return v;
  for (std::size_t r = 0; r < basis_.rows(); ++r) {
    // pivot column = first nonzero of basis row (RREF, entry 1)
    std::size_t pc = 0;
    while (pc < ambient_ && basis_.at(r, pc).is_zero()) ++pc;
    if (pc == ambient_) continue;
    if (v.at(0, pc).is_zero()) continue;
    FieldElem fct = v.at(0, pc);
    for (std::size_t j = 0; j < ambient_; ++j) v.at(0, j) = v.at(0, j) - fct * basis_.at(r, j);
  }
  return v;
}

bool Subspace::contains(const Matrix& v) const { return reduce(v).is_zero(); }

bool Subspace::operator==(const Subspace& o) const {
  if (ambient_ != o.ambient_) return false;
  if (dim() != o.dim()) return false;
  if (is_zero_ && o.is_zero_) return true;
  return basis_ == o.basis_;
}

Subspace kernel(const Matrix& m) {
  Echelon e = echelon(m);
  const Field& f = m.field();
  std::size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (std::size_t c : e.pivot_cols) is_pivot[c] = true;
  std::size_t kdim = n - e.rank;
  if (kdim == 0) return Subspace::zero(f, n);
  Matrix basis(f, kdim, n);
  std::size_t row = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (is_pivot[c]) continue;
    basis.at(row, c) = f.one();
    for (std::size_t r = 0; r < e.rank; ++r) basis.at(row, e.pivot_cols[r]) = -e.rref.at(r, c);
    ++row;
  }
  // rows are already independent; normalize to canonical form
  return Subspace::span(basis);
}

SolveResult solve(const Matrix& m, const Matrix& b) {
  if (b.rows() != m.rows() || b.cols() != 1) throw DimensionMismatch("solve expects b as rows x 1");
  const Field& f = m.field();
  Matrix aug(f, m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols()) = b.at(i, 0);
  }
  Echelon e = echelon(aug, /*want_transform=*/false, /*pivot_col_limit=*/m.cols());
  bool inconsistent = false;
  for (std::size_t i = e.rank; i < m.rows() && !inconsistent; ++i)
    inconsistent = !e.rref.at(i, m.cols()).is_zero();
  if (inconsistent) {
    // certificate: a left-kernel row of m that does not kill b
    Subspace left = kernel(m.transpose());
    for (std::size_t r = 0; r < left.dim(); ++r) {
      Matrix y = left.basis().row(r);
      if (!(y * b).at(0, 0).is_zero()) {
        SolveResult res;
        res.certificate = std::move(y);
        return res;
      }
    }
    throw Error("internal: inconsistent system without a left-kernel certificate");
  }
  Matrix x(f, m.cols(), 1);
  for (std::size_t r = 0; r < e.rank; ++r) x.at(e.pivot_cols[r], 0) = e.rref.at(r, m.cols());
  SolveResult res;
  res.solution = std::move(x);
  return res;
}

// ---------------------------------------------------------------------------
// SpanBuilder
// ---------------------------------------------------------------------------

SpanBuilder::SpanBuilder(const Field& f, std::size_t ambient) : field_(f), ambient_(ambient) {}

bool SpanBuilder::insert(Matrix v) {
  if (v.rows() != 1 || v.cols() != ambient_) throw DimensionMismatch("SpanBuilder expects 1 x ambient rows");
  const bool prim = needs_primitivize(field_.spec());
  auto primitivize = [&](Matrix& row) {
    if (!prim) return;
    std::vector<FieldElem> tmp;
    tmp.reserve(ambient_);
    for (std::size_t j = 0; j < ambient_; ++j) tmp.push_back(row.at(0, j));
    primitivize_row(tmp);
    for (std::size_t j = 0; j < ambient_; ++j) row.at(0, j) = tmp[j];
  };
  primitivize(v);
  // forward reduction only; later rows clean up coordinates reintroduced by
  // earlier unreduced pivot rows
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (v.at(0, pivots_[r]).is_zero()) continue;
    if (prim) {
      FieldElem p = rows_[r].at(0, pivots_[r]), e = v.at(0, pivots_[r]);
      for (std::size_t j = 0; j < ambient_; ++j)
        v.at(0, j) = p * v.at(0, j) - e * rows_[r].at(0, j);
      primitivize(v);
    } else {
      FieldElem fct = v.at(0, pivots_[r]) / rows_[r].at(0, pivots_[r]);
      for (std::size_t j = 0; j < ambient_; ++j)
        v.at(0, j) = v.at(0, j) - fct * rows_[r].at(0, j);
    }
  }
  std::size_t pc = 0;
  while (pc < ambient_ && v.at(0, pc).is_zero()) ++pc;
  if (pc == ambient_) return false;
  rows_.push_back(std::move(v));
  pivots_.push_back(pc);
  return true;
}

// ---------------------------------------------------------------------------
// adjoint-module helpers
// ---------------------------------------------------------------------------

TracelessMatrix::TracelessMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw DimensionMismatch("traceless matrix must be square");
  if (!m_.trace().is_zero()) throw InvalidArgument("matrix has nonzero trace");
}

FieldElem trace_pair(const Matrix& b, const TracelessMatrix& a) {
  const Matrix& am = a.matrix();
  if (b.rows() != am.rows() || b.cols() != am.cols())
    throw DimensionMismatch("trace pairing shape mismatch");
  FieldElem s = b.field().zero();
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) s = s + b.at(i, j) * am.at(j, i);
  return s;
}

Matrix unit_matrix(const Field& f, std::size_t n, std::size_t i, std::size_t j) {
  if (i < 1 || j < 1 || i > n || j > n) throw IndexOutOfRange("unit matrix index out of range");
  Matrix m(f, n, n);
  m.at(i - 1, j - 1) = f.one();
  return m;
}

}  // namespace rootgeo
