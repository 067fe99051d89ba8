#ifndef ROOTGEO_GEOMETRY_HPP
#define ROOTGEO_GEOMETRY_HPP

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "rootgeo/slgroup.hpp"

namespace rootgeo {

// A point of the geometry: a point-hyperplane flag (p, H) of PG(n, K),
// carried by chosen representatives v (row) and lambda (column) with
// v . lambda = 0. Comparisons normalize; the action formulas consume the
// exact representatives.
class Flag {
 public:
  Flag(Matrix v, Matrix lambda);

  const Matrix& v() const { return v_; }
  const Matrix& lambda() const { return lam_; }
  std::size_t size() const { return v_.cols(); }  // n+1
  const Field& field() const { return v_.field(); }

  Flag normalized() const;  // first nonzero coordinate of each part scaled to 1
  bool proj_equal(const Flag& o) const;
  bool operator==(const Flag& o) const { return v_ == o.v_ && lam_ == o.lam_; }

  std::string key() const;  // canonical string of the normalized flag

 private:
  Matrix v_;    // 1 x (n+1)
  Matrix lam_;  // (n+1) x 1
};

Flag act_on_flag(const Flag& f, const GroupElem& g);  // (v g, g^{-1} lambda)

// A line of the geometry. Both families are stored in the same shape:
//   PointPencil l_{p,S}:      anchor = v (the fixed point), pencil rows =
//                             transposed functionals spanning the annihilator
//                             of S (all vanishing on v);
//   HyperplanePencil l_{L,H}: anchor = lambda^T (the fixed hyperplane),
//                             pencil rows = the 2-dimensional point space L.
// In both cases pencil * anchor^T = 0 and the pencil has rank 2.
struct GeomLine {
  enum class Family { PointPencil, HyperplanePencil };
  Family family;
  Matrix anchor;  // 1 x (n+1)
  Matrix pencil;  // 2 x (n+1), rank 2

  GeomLine(Family fam, Matrix anchor, Matrix pencil);
  std::size_t size() const { return anchor.cols(); }

  GeomLine canonical() const;  // normalized anchor, RREF pencil
  std::string key() const;
  bool operator==(const GeomLine& o) const;
};

bool incident(const Flag& f, const GeomLine& l);
GeomLine act_on_line(const GeomLine& l, const GroupElem& g);

// Incidence dump: the external interchange format (normalized flags plus
// per-line flag index lists).
struct GeometryDump {
  std::size_t n = 0;
  std::uint64_t q = 0;
  std::vector<Flag> flags;
  std::vector<GeomLine::Family> line_family;
  std::vector<std::vector<std::size_t>> line_flags;

  nlohmann::json to_json() const;
  static GeometryDump from_json(const nlohmann::json& j);
};

// Fully enumerated finite geometry over F_q (q prime).
class Geometry {
 public:
  static Geometry enumerate(std::size_t n, std::uint64_t q);  // UnsupportedField

  std::size_t n() const { return n_; }
  std::uint64_t q() const { return q_; }
  const Field& field() const { return field_; }

  const std::vector<Flag>& flags() const { return flags_; }
  const std::vector<GeomLine>& lines() const { return lines_; }
  const std::vector<std::vector<std::size_t>>& line_flags() const { return line_flags_; }
  const std::vector<std::vector<std::size_t>>& flag_lines() const { return flag_lines_; }

  std::size_t flag_index(const Flag& f) const;      // IndexOutOfRange if absent
  std::size_t line_index(const GeomLine& l) const;  // IndexOutOfRange if absent

  GeometryDump dump() const;

 private:
  Geometry(std::size_t n, std::uint64_t q, Field f);
  std::size_t n_;
  std::uint64_t q_;
  Field field_;
  std::vector<Flag> flags_;
  std::vector<GeomLine> lines_;
  std::vector<std::vector<std::size_t>> line_flags_;
  std::vector<std::vector<std::size_t>> flag_lines_;
  std::map<std::string, std::size_t> flag_by_key_;
  std::map<std::string, std::size_t> line_by_key_;
};

// Random flag over any configured field: v nonzero, lambda a nonzero vector
// of the annihilator of v.
Flag sample_flag(const Field& f, std::size_t n, Rng& rng, const SampleParams& sp = {});

// base flag (e_1, eta_{n+1})
Flag base_flag(const Field& f, std::size_t n);

}  // namespace rootgeo

#endif
