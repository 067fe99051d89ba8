#include "rootgeo/ronan.hpp"

namespace rootgeo {

EmbeddingTable natural_embedding_table(const GeometryDump& dump) {
  EmbeddingTable t;
  const std::size_t m = dump.n + 1;
  t.dim = m * m;
  t.vecs.reserve(dump.flags.size());
  for (const Flag& f : dump.flags) t.vecs.push_back(natural_embed(f).matrix().flatten());
  return t;
}

namespace {

// coordinates of `target` in the (independent) pair of rows b0, b1
std::pair<FieldElem, FieldElem> coords_in_pair(const Matrix& b0, const Matrix& b1,
                                               const Matrix& target) {
  const Field& f = b0.field();
  Matrix sys(f, b0.cols(), 2);
  for (std::size_t k = 0; k < b0.cols(); ++k) {
    sys.at(k, 0) = b0.at(0, k);
    sys.at(k, 1) = b1.at(0, k);
  }
  SolveResult res = solve(sys, target.transpose());
  if (!res.consistent()) throw DegenerateLine("flag image outside its line block");
  return {res.solution->at(0, 0), res.solution->at(1, 0)};
}

}  // namespace

std::pair<RonanSpace, RelationSet> build_ronan(const GeometryDump& dump,
                                               const EmbeddingTable& emb) {
  if (emb.vecs.size() != dump.flags.size())
    throw DimensionMismatch("embedding table does not match the dump");
  const Field& f = emb.vecs.front().field();

  RonanSpace rs;
  rs.flag_offset.resize(dump.flags.size());
  rs.line_offset.resize(dump.line_flags.size());
  rs.line_basis.resize(dump.line_flags.size());
  std::size_t off = 0;
  for (std::size_t i = 0; i < dump.flags.size(); ++i) rs.flag_offset[i] = off++;
  for (std::size_t l = 0; l < dump.line_flags.size(); ++l) {
    const auto& on_line = dump.line_flags[l];
    if (on_line.size() < 2) throw DegenerateLine("line with fewer than 2 flags");
    Matrix stack = emb.vecs[on_line[0]];
    for (std::size_t k = 1; k < on_line.size(); ++k) stack = stack.vstack(emb.vecs[on_line[k]]);
    if (rank(stack) != 2)
      throw DegenerateLine("line " + std::to_string(l) + " images do not span 2 dimensions");
    rs.line_basis[l] = {on_line[0], on_line[1]};
    rs.line_offset[l] = off;
    off += 2;
  }
  rs.total_dim = off;

  std::size_t n_rows = 0;
  for (const auto& fl : dump.line_flags) n_rows += fl.size();
  Matrix rows(f, n_rows, rs.total_dim);
  std::size_t r = 0;
  for (std::size_t l = 0; l < dump.line_flags.size(); ++l) {
    const Matrix& b0 = emb.vecs[rs.line_basis[l][0]];
    const Matrix& b1 = emb.vecs[rs.line_basis[l][1]];
    for (std::size_t fi : dump.line_flags[l]) {
      auto [c0, c1] = coords_in_pair(b0, b1, emb.vecs[fi]);
      rows.at(r, rs.flag_offset[fi]) = f.one();
      rows.at(r, rs.line_offset[l]) = -c0;
      rows.at(r, rs.line_offset[l] + 1) = -c1;
      ++r;
    }
  }
  return {std::move(rs), RelationSet{std::move(rows)}};
}

std::size_t cover_dimension(const RonanSpace& rs, const RelationSet& rel) {
  return rs.total_dim - rank(rel.rows);
}

namespace {

// projection V -> K^dim as a total_dim x dim matrix (row-vector convention)
Matrix projection_matrix(const GeometryDump& dump, const EmbeddingTable& emb,
                         const RonanSpace& rs) {
  const Field& f = emb.vecs.front().field();
  Matrix p(f, rs.total_dim, emb.dim);
  for (std::size_t i = 0; i < dump.flags.size(); ++i)
    for (std::size_t k = 0; k < emb.dim; ++k) p.at(rs.flag_offset[i], k) = emb.vecs[i].at(0, k);
  for (std::size_t l = 0; l < dump.line_flags.size(); ++l)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t k = 0; k < emb.dim; ++k)
        p.at(rs.line_offset[l] + b, k) = emb.vecs[rs.line_basis[l][b]].at(0, k);
  return p;
}

// drop the pivot coordinates of a reduced vector: coordinates in V/W
Matrix quotient_coords(const Subspace& w, const std::vector<bool>& is_pivot,
                       std::size_t qdim, Matrix v) {
  v = w.reduce(std::move(v));
  Matrix out(v.field(), 1, qdim);
  std::size_t k = 0;
  for (std::size_t j = 0; j < v.cols(); ++j)
    if (!is_pivot[j]) out.at(0, k++) = v.at(0, j);
  return out;
}

}  // namespace

ProjectionReport cover_projection(const GeometryDump& dump, const EmbeddingTable& emb,
                                  const RonanSpace& rs, const RelationSet& rel) {
  ProjectionReport rep;
  const Field& f = emb.vecs.front().field();
  Matrix p = projection_matrix(dump, emb, rs);

  Matrix mapped = rel.rows * p;
  rep.relations_killed = mapped.is_zero();
  if (!rep.relations_killed) throw RelationNotKilled();

  rep.flag_blocks_ok = true;
  for (std::size_t i = 0; i < dump.flags.size(); ++i) {
    Matrix unit(f, 1, rs.total_dim);
    unit.at(0, rs.flag_offset[i]) = f.one();
    if (unit * p != emb.vecs[i]) {
      rep.flag_blocks_ok = false;
      break;
    }
  }

  rep.projection_rank = rank(p);
  Matrix images = emb.vecs[0];
  for (std::size_t i = 1; i < emb.vecs.size(); ++i) images = images.vstack(emb.vecs[i]);
  rep.span_dim = rank(images);
  std::size_t cover_dim = cover_dimension(rs, rel);
  rep.quotient_bijective = rep.projection_rank == cover_dim;

  // quotient-side line spans: W-reduced flag blocks, restricted to free coords
  Subspace w = Subspace::span(rel.rows);
  std::vector<bool> is_pivot(rs.total_dim, false);
  for (std::size_t r = 0; r < w.dim(); ++r) {
    std::size_t pc = 0;
    while (pc < rs.total_dim && w.basis().at(r, pc).is_zero()) ++pc;
    is_pivot[pc] = true;
  }
  std::size_t qdim = rs.total_dim - w.dim();
  std::vector<Matrix> flag_q;
  flag_q.reserve(dump.flags.size());
  for (std::size_t i = 0; i < dump.flags.size(); ++i) {
    Matrix unit(f, 1, rs.total_dim);
    unit.at(0, rs.flag_offset[i]) = f.one();
    flag_q.push_back(quotient_coords(w, is_pivot, qdim, std::move(unit)));
  }
  rep.quotient_lines_ok = true;
  for (const auto& on_line : dump.line_flags) {
    Matrix stack = flag_q[on_line[0]];
    for (std::size_t k = 1; k < on_line.size(); ++k) stack = stack.vstack(flag_q[on_line[k]]);
    if (rank(stack) != 2) {
      rep.quotient_lines_ok = false;
      break;
    }
  }
  return rep;
}

nlohmann::json ProjectionReport::to_json() const {
  return {{"relations_killed", relations_killed},
          {"flag_blocks_ok", flag_blocks_ok},
          {"projection_rank", projection_rank},
          {"span_dim", span_dim},
          {"quotient_bijective", quotient_bijective},
          {"quotient_lines_ok", quotient_lines_ok}};
}

// ---------------------------------------------------------------------------
// lifting the group action
// ---------------------------------------------------------------------------

namespace {

// scalar c with acted == c * reference (both nonzero, projectively equal)
FieldElem proportion(const Matrix& acted, const Matrix& reference) {
  std::size_t k = 0;
  while (k < reference.cols() && reference.at(0, k).is_zero()) ++k;
  if (k == reference.cols()) throw Error("internal: zero reference vector");
  FieldElem c = acted.at(0, k) / reference.at(0, k);
  if (acted != reference.scaled(c)) throw Error("internal: images are not proportional");
  return c;
}

// flattened-coordinate matrix of a -> g^{-1} a g (row-vector convention)
Matrix adjoint_flat_matrix(const GroupElem& g, std::size_t dim_side) {
  const Field& f = g.field();
  const std::size_t m = dim_side;
  Matrix r(f, m * m, m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l)
          r.at(i * m + j, k * m + l) = g.inverse().at(k, i) * g.matrix().at(j, l);
  return r;
}

}  // namespace

LiftReport lift_check(const Geometry& geo, const EmbeddingTable& emb, const RonanSpace& rs,
                      const RelationSet& rel) {
  LiftReport rep;
  const Field& f = geo.field();
  const std::size_t m = geo.n() + 1;
  Matrix p = projection_matrix(geo.dump(), emb, rs);
  Subspace w = Subspace::span(rel.rows);

  rep.ok = true;
  for (std::size_t i = 1; i <= m && rep.ok; ++i) {
    for (std::size_t j = 1; j <= m && rep.ok; ++j) {
      if (i == j) continue;
      for (std::uint64_t s = 1; s < geo.q() && rep.ok; ++s) {
        GroupElem g = transvection(f, m, i, j, f.from_int(static_cast<long>(s)));
        ++rep.generators_checked;

        Matrix rg = adjoint_flat_matrix(g, m);
        Matrix ghat(f, rs.total_dim, rs.total_dim);
        for (std::size_t fi = 0; fi < geo.flags().size(); ++fi) {
          Flag image = act_on_flag(geo.flags()[fi], g);
          std::size_t fj = geo.flag_index(image);
          Matrix acted = emb.vecs[fi] * rg;
          ghat.at(rs.flag_offset[fi], rs.flag_offset[fj]) = proportion(acted, emb.vecs[fj]);
        }
        for (std::size_t li = 0; li < geo.lines().size(); ++li) {
          std::size_t lj = geo.line_index(act_on_line(geo.lines()[li], g));
          const Matrix& t0 = emb.vecs[rs.line_basis[lj][0]];
          const Matrix& t1 = emb.vecs[rs.line_basis[lj][1]];
          for (std::size_t b = 0; b < 2; ++b) {
            Matrix acted = emb.vecs[rs.line_basis[li][b]] * rg;
            auto [c0, c1] = coords_in_pair(t0, t1, acted);
            ghat.at(rs.line_offset[li] + b, rs.line_offset[lj]) = c0;
            ghat.at(rs.line_offset[li] + b, rs.line_offset[lj] + 1) = c1;
          }
        }

        // descends: the relation span is stabilized
        Matrix moved = rel.rows * ghat;
        for (std::size_t r = 0; r < moved.rows(); ++r) {
          if (!w.contains(moved.row(r))) {
            rep.ok = false;
            break;
          }
        }
        // commutes with the projection
        if (rep.ok && ghat * p != p * rg) rep.ok = false;
      }
    }
  }
  return rep;
}

nlohmann::json LiftReport::to_json() const {
  return {{"ok", ok}, {"generators_checked", generators_checked}};
}

}  // namespace rootgeo
