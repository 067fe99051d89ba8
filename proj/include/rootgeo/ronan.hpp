#ifndef ROOTGEO_RONAN_HPP
#define ROOTGEO_RONAN_HPP

#include <array>

#include "rootgeo/embeddings.hpp"

namespace rootgeo {

// A finite embedding presented as one coordinate row per flag of a dump.
struct EmbeddingTable {
  std::size_t dim = 0;
  std::vector<Matrix> vecs;  // 1 x dim each, indexed like dump.flags
};

EmbeddingTable natural_embedding_table(const GeometryDump& dump);

// The big direct sum: one 1-dimensional block per flag, one 2-dimensional
// block per line with basis the embedded images of the line's first two
// flags in enumeration order.
struct RonanSpace {
  std::size_t total_dim = 0;
  std::vector<std::size_t> flag_offset;
  std::vector<std::size_t> line_offset;
  std::vector<std::array<std::size_t, 2>> line_basis;  // flag indices per line
};

// One row per incident (flag, line) pair: b - iota_{p,l}(b) with the
// line-block coordinates of the flag's embedded image solved exactly.
struct RelationSet {
  Matrix rows;
};

// DegenerateLine when some line's flag images do not span exactly 2 dims
std::pair<RonanSpace, RelationSet> build_ronan(const GeometryDump& dump,
                                               const EmbeddingTable& emb);

std::size_t cover_dimension(const RonanSpace& rs, const RelationSet& rel);

struct ProjectionReport {
  bool relations_killed = false;   // every gluing row maps to zero
  bool flag_blocks_ok = false;     // flag block b_f maps to emb(f)
  std::size_t projection_rank = 0;
  std::size_t span_dim = 0;        // dim span{emb(f)}
  bool quotient_bijective = false; // cover_dim == projection rank
  bool quotient_lines_ok = false;  // in V/W each line's flag images span 2 dims
  nlohmann::json to_json() const;
};

ProjectionReport cover_projection(const GeometryDump& dump, const EmbeddingTable& emb,
                                  const RonanSpace& rs, const RelationSet& rel);

// Lifts each SL(n+1, q) transvection generator to the big space, then checks
// that it stabilizes the relation span (so it descends to the quotient) and
// commutes with the projection. Exact and exhaustive over the generators.
struct LiftReport {
  bool ok = false;
  std::size_t generators_checked = 0;
  nlohmann::json to_json() const;
};

LiftReport lift_check(const Geometry& geo, const EmbeddingTable& emb, const RonanSpace& rs,
                      const RelationSet& rel);

}  // namespace rootgeo

#endif
