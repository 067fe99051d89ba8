#include "rootgeo/geometry.hpp"

#include <algorithm>

namespace rootgeo {

// ---------------------------------------------------------------------------
// Flag
// ---------------------------------------------------------------------------

Flag::Flag(Matrix v, Matrix lambda) : v_(std::move(v)), lam_(std::move(lambda)) {
  if (v_.rows() != 1) throw DimensionMismatch("point representative must be a row vector");
  if (lam_.cols() != 1) throw DimensionMismatch("hyperplane representative must be a column vector");
  if (v_.cols() != lam_.rows()) throw DimensionMismatch("flag vector lengths differ");
  if (v_.is_zero() || lam_.is_zero()) throw InvalidArgument("flag representatives must be nonzero");
  if (!(v_ * lam_).at(0, 0).is_zero()) throw InvalidArgument("not a flag: lambda(v) != 0");
}

namespace {

Matrix normalize_row(Matrix r) {
  std::size_t j = 0;
  while (j < r.cols() && r.at(0, j).is_zero()) ++j;
  if (j == r.cols()) throw InvalidArgument("cannot normalize the zero vector");
  FieldElem inv = r.at(0, j).inv();
  for (std::size_t k = 0; k < r.cols(); ++k) r.at(0, k) = r.at(0, k) * inv;
  return r;
}

std::string row_key(const Matrix& r) {
  std::string s;
  for (std::size_t j = 0; j < r.cols(); ++j) {
    s += r.at(0, j).to_string();
    s += ',';
  }
  return s;
}

}  // namespace

Flag Flag::normalized() const {
  Matrix nv = normalize_row(v_);
  Matrix nl = normalize_row(lam_.transpose()).transpose();
  return Flag(std::move(nv), std::move(nl));
}

bool Flag::proj_equal(const Flag& o) const {
  if (size() != o.size()) return false;
  Flag a = normalized(), b = o.normalized();
  return a.v_ == b.v_ && a.lam_ == b.lam_;
}

std::string Flag::key() const {
  Flag n = normalized();
  return row_key(n.v_) + "|" + row_key(n.lam_.transpose());
}

Flag act_on_flag(const Flag& f, const GroupElem& g) {
  if (f.size() != g.size()) throw DimensionMismatch("flag/group size mismatch");
  return Flag(f.v() * g.matrix(), g.inverse() * f.lambda());
}

// ---------------------------------------------------------------------------
// GeomLine
// ---------------------------------------------------------------------------

GeomLine::GeomLine(Family fam, Matrix anchor_, Matrix pencil_)
    : family(fam), anchor(std::move(anchor_)), pencil(std::move(pencil_)) {
  if (anchor.rows() != 1 || pencil.rows() != 2 || pencil.cols() != anchor.cols())
    throw DimensionMismatch("line data shapes");
  if (anchor.is_zero()) throw InvalidArgument("line anchor must be nonzero");
  if (rank(pencil) != 2) throw InvalidArgument("line pencil must have rank 2");
  if (!(pencil * anchor.transpose()).is_zero())
    throw InvalidArgument("line pencil does not annihilate the anchor");
}

GeomLine GeomLine::canonical() const {
  Echelon e = echelon(pencil);
  Matrix p(anchor.field(), 2, pencil.cols());
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < pencil.cols(); ++j) p.at(i, j) = e.rref.at(i, j);
  return GeomLine(family, normalize_row(anchor), std::move(p));
}

std::string GeomLine::key() const {
  GeomLine c = canonical();
  std::string s = family == Family::PointPencil ? "P|" : "H|";
  s += row_key(c.anchor) + "|" + row_key(c.pencil.row(0)) + "|" + row_key(c.pencil.row(1));
  return s;
}

bool GeomLine::operator==(const GeomLine& o) const {
  if (family != o.family) return false;
  GeomLine a = canonical(), b = o.canonical();
  return a.anchor == b.anchor && a.pencil == b.pencil;
}

bool incident(const Flag& f, const GeomLine& l) {
  if (f.size() != l.size()) throw DimensionMismatch("flag/line size mismatch");
  const Matrix& fixed = l.family == GeomLine::Family::PointPencil
                            ? f.v()
                            : f.lambda().transpose();
  const Matrix& moving = l.family == GeomLine::Family::PointPencil
                             ? f.lambda().transpose()
                             : f.v();
  // fixed part matches the anchor projectively; moving part lies in the pencil
  if (rank(l.anchor.vstack(fixed)) != 1) return false;
  return rank(l.pencil.vstack(moving)) == 2;
}

GeomLine act_on_line(const GeomLine& l, const GroupElem& g) {
  if (l.size() != g.size()) throw DimensionMismatch("line/group size mismatch");
  Matrix ginv_t = g.inverse().transpose();
  if (l.family == GeomLine::Family::PointPencil)
    return GeomLine(l.family, l.anchor * g.matrix(), l.pencil * ginv_t);
  return GeomLine(l.family, l.anchor * ginv_t, l.pencil * g.matrix());
}

// ---------------------------------------------------------------------------
// enumeration
// ---------------------------------------------------------------------------

namespace {

// all normalized representatives of projective points of F_q^m
std::vector<Matrix> projective_reps(const Field& f, std::size_t m, std::uint64_t q) {
  std::vector<Matrix> out;
  std::vector<std::uint64_t> digits(m, 0);
  const std::size_t total = [&] {
    std::size_t t = 1;
    for (std::size_t i = 0; i < m; ++i) t *= q;
    return t;
  }();
  for (std::size_t code = 1; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < m; ++i) {
      digits[i] = c % q;
      c /= q;
    }
    std::size_t lead = 0;
    while (digits[lead] == 0) ++lead;
    if (digits[lead] != 1) continue;  // canonical: first nonzero coordinate is 1
    Matrix v(f, 1, m);
    for (std::size_t i = 0; i < m; ++i) v.at(0, i) = f.from_int(static_cast<long>(digits[i]));
    out.push_back(std::move(v));
  }
  return out;
}

// all canonical 2-dimensional row spaces of F_q^m, as RREF 2 x m matrices
std::vector<Matrix> two_spaces(const Field& f, const std::vector<Matrix>& reps) {
  std::vector<Matrix> out;
  std::map<std::string, bool> seen;
  for (std::size_t a = 0; a < reps.size(); ++a) {
    for (std::size_t b = a + 1; b < reps.size(); ++b) {
      Matrix stack = reps[a].vstack(reps[b]);
      Echelon e = echelon(stack);
      if (e.rank != 2) continue;
      Matrix basis(f, 2, reps[a].cols());
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < reps[a].cols(); ++j) basis.at(i, j) = e.rref.at(i, j);
      std::string k = row_key(basis.row(0)) + "|" + row_key(basis.row(1));
      if (seen.emplace(k, true).second) out.push_back(std::move(basis));
    }
  }
  return out;
}

}  // namespace

Geometry::Geometry(std::size_t n, std::uint64_t q, Field f) : n_(n), q_(q), field_(std::move(f)) {}

Geometry Geometry::enumerate(std::size_t n, std::uint64_t q) {
  if (!is_prime_u64(q)) throw UnsupportedField("geometry enumeration needs a prime q");
  if (n < 2) throw InvalidArgument("the geometry is defined for n >= 2");
  Field f(FieldSpec{FieldKind::Prime, q});
  Geometry g(n, q, f);
  const std::size_t m = n + 1;

  std::vector<Matrix> reps = projective_reps(f, m, q);

  // flags: (point, hyperplane) with v . lambda = 0
  for (const Matrix& v : reps) {
    for (const Matrix& h : reps) {
      Matrix lam = h.transpose();
      if (!(v * lam).at(0, 0).is_zero()) continue;
      Flag fl(v, lam);
      g.flag_by_key_.emplace(fl.key(), g.flags_.size());
      g.flags_.push_back(std::move(fl));
    }
  }

  std::vector<Matrix> spaces = two_spaces(f, reps);

  auto add_line = [&](GeomLine line) {
    GeomLine c = line.canonical();
    std::size_t idx = g.lines_.size();
    g.line_by_key_.emplace(c.key(), idx);
    // flags on the line: anchor fixed, moving part runs over the projective
    // points of the pencil
    std::vector<std::size_t> on_line;
    for (std::uint64_t c1 = 0; c1 <= 1; ++c1) {
      std::uint64_t c0_max = c1 == 0 ? 1 : q - 1;
      for (std::uint64_t c0 = c1 == 0 ? 1 : 0; c0 <= c0_max; ++c0) {
        // (c0, c1) with first nonzero = 1: c1 == 0 -> (1, 0); c1 == 1 -> (c0, 1)
        Matrix mv = c.pencil.row(0).scaled(f.from_int(static_cast<long>(c0))) +
                    c.pencil.row(1).scaled(f.from_int(static_cast<long>(c1)));
        if (mv.is_zero()) continue;
        Flag fl = c.family == GeomLine::Family::PointPencil
                      ? Flag(c.anchor, mv.transpose())
                      : Flag(mv, c.anchor.transpose());
        on_line.push_back(g.flag_index(fl));
      }
    }
    std::sort(on_line.begin(), on_line.end());
    g.line_flags_.push_back(std::move(on_line));
    g.lines_.push_back(std::move(c));
  };

  // point pencils l_{p,S}: anchor = point of S, pencil = annihilator of S
  for (const Matrix& s : spaces) {
    // points killed by both functionals: kernel of the 2 x m pencil
    Subspace pts = kernel(s);
    for (const Matrix& v : reps) {
      if (!pts.contains(v)) continue;
      add_line(GeomLine(GeomLine::Family::PointPencil, v, s));
    }
  }
  // hyperplane pencils l_{L,H}: anchor = hyperplane, pencil = line L inside it
  for (const Matrix& h : reps) {
    for (const Matrix& l : spaces) {
      if (!(l * h.transpose()).is_zero()) continue;
      add_line(GeomLine(GeomLine::Family::HyperplanePencil, h, l));
    }
  }

  g.flag_lines_.assign(g.flags_.size(), {});
  for (std::size_t li = 0; li < g.lines_.size(); ++li)
    for (std::size_t fi : g.line_flags_[li]) g.flag_lines_[fi].push_back(li);
  return g;
}

std::size_t Geometry::flag_index(const Flag& f) const {
  auto it = flag_by_key_.find(f.key());
  if (it == flag_by_key_.end()) throw IndexOutOfRange("flag not in the enumeration");
  return it->second;
}

std::size_t Geometry::line_index(const GeomLine& l) const {
  auto it = line_by_key_.find(l.canonical().key());
  if (it == line_by_key_.end()) throw IndexOutOfRange("line not in the enumeration");
  return it->second;
}

GeometryDump Geometry::dump() const {
  GeometryDump d;
  d.n = n_;
  d.q = q_;
  d.flags = flags_;
  d.line_flags = line_flags_;
  d.line_family.reserve(lines_.size());
  for (const auto& l : lines_) d.line_family.push_back(l.family);
  return d;
}

// ---------------------------------------------------------------------------
// dump JSON
// ---------------------------------------------------------------------------

nlohmann::json GeometryDump::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["q"] = q;
  nlohmann::json fl = nlohmann::json::array();
  for (const Flag& f : flags) {
    nlohmann::json v = nlohmann::json::array(), lam = nlohmann::json::array();
    for (std::size_t k = 0; k < f.size(); ++k) {
      v.push_back(f.v().at(0, k).to_string());
      lam.push_back(f.lambda().at(k, 0).to_string());
    }
    fl.push_back({{"v", v}, {"lambda", lam}});
  }
  j["flags"] = std::move(fl);
  nlohmann::json ls = nlohmann::json::array();
  for (std::size_t i = 0; i < line_flags.size(); ++i) {
    ls.push_back({{"family", line_family[i] == GeomLine::Family::PointPencil ? "point_pencil"
                                                                             : "hyperplane_pencil"},
                  {"flags", line_flags[i]}});
  }
  j["lines"] = std::move(ls);
  return j;
}

GeometryDump GeometryDump::from_json(const nlohmann::json& j) {
  GeometryDump d;
  d.n = j.at("n").get<std::size_t>();
  d.q = j.at("q").get<std::uint64_t>();
  Field f(FieldSpec{FieldKind::Prime, d.q});
  for (const auto& jf : j.at("flags")) {
    const auto& jv = jf.at("v");
    const auto& jl = jf.at("lambda");
    Matrix v(f, 1, jv.size());
    Matrix lam(f, jl.size(), 1);
    for (std::size_t k = 0; k < jv.size(); ++k) {
      v.at(0, k) = f.parse_elem(jv[k].get<std::string>());
      lam.at(k, 0) = f.parse_elem(jl[k].get<std::string>());
    }
    d.flags.emplace_back(std::move(v), std::move(lam));
  }
  for (const auto& jl : j.at("lines")) {
    d.line_family.push_back(jl.at("family").get<std::string>() == "point_pencil"
                                ? GeomLine::Family::PointPencil
                                : GeomLine::Family::HyperplanePencil);
    d.line_flags.push_back(jl.at("flags").get<std::vector<std::size_t>>());
  }
  return d;
}

// ---------------------------------------------------------------------------
// flag sampling
// ---------------------------------------------------------------------------

Flag base_flag(const Field& f, std::size_t n) {
  Matrix v(f, 1, n + 1);
  v.at(0, 0) = f.one();
  Matrix lam(f, n + 1, 1);
  lam.at(n, 0) = f.one();
  return Flag(std::move(v), std::move(lam));
}

Flag sample_flag(const Field& f, std::size_t n, Rng& rng, const SampleParams& sp) {
  const std::size_t m = n + 1;
  for (int tries = 0; tries < 10000; ++tries) {
    Matrix v(f, 1, m);
    for (std::size_t j = 0; j < m; ++j) v.at(0, j) = f.sample(rng, sp);
    if (v.is_zero()) continue;
    Subspace ann = kernel(v);  // functionals (as rows) vanishing on v
    Matrix lam_row(f, 1, m);
    for (std::size_t r = 0; r < ann.dim(); ++r)
      lam_row = lam_row + ann.basis().row(r).scaled(f.sample(rng, sp));
    if (lam_row.is_zero()) continue;
    return Flag(std::move(v), lam_row.transpose());
  }
  throw Error("flag sampler exhausted its retry budget");
}

}  // namespace rootgeo
