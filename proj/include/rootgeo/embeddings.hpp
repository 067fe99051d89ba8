#ifndef ROOTGEO_EMBEDDINGS_HPP
#define ROOTGEO_EMBEDDINGS_HPP

#include <map>

#include "rootgeo/geometry.hpp"

namespace rootgeo {

// Element of M x A where M = Der_Omega(K) with basis {d_omega} and A is the
// adjoint module: a finite-support coordinate vector over Omega plus a
// traceless matrix. Zero coordinates are never stored explicitly.
struct ExtendedVector {
  std::map<std::size_t, FieldElem> m;
  TracelessMatrix a;

  ExtendedVector(std::map<std::size_t, FieldElem> m_, TracelessMatrix a_);
  bool operator==(const ExtendedVector& o) const;
  bool operator!=(const ExtendedVector& o) const { return !(*this == o); }

  // 1 x (drk + (n+1)^2) coordinate row: the m-block then the flattened matrix
  Matrix coords() const;
};

// natural embedding: (p,H) with representatives (v, lambda) -> lambda * v,
// a rank-1 traceless matrix
TracelessMatrix natural_embed(const Flag& f);

// the cover embedding: (sum_omega (v . d_omega(lambda)) d_omega, lambda * v)
ExtendedVector universal_embed(const Flag& f);

// the extended action
// (m, a) . g = (m + sum_omega Tr(g d_omega(g^{-1}) a) d_omega, g^{-1} a g)
ExtendedVector extended_act(const ExtendedVector& x, const GroupElem& g);

// random traceless matrix (all entries sampled, last diagonal forced)
TracelessMatrix sample_traceless(const Field& f, std::size_t n_plus_1, Rng& rng,
                                 const SampleParams& sp = {});
ExtendedVector sample_extended(const Field& f, std::size_t n_plus_1, Rng& rng,
                               const SampleParams& sp = {});
// random geometry line through a sampled flag, either family
GeomLine sample_line(const Field& f, std::size_t n, Rng& rng, GeomLine::Family family,
                     const SampleParams& sp = {});

// ---------------------------------------------------------------------------
// verification drivers
// ---------------------------------------------------------------------------

struct VerifyOptions {
  std::size_t samples = 500;
  std::uint64_t seed = 1;
  std::size_t word_length = 3;
  SampleParams sample_params{};
};

struct CheckReport {
  std::string check;
  bool pass = true;
  std::size_t samples_run = 0;
  nlohmann::json details;         // per-check extras (counts etc.)
  nlohmann::json counterexample;  // empty unless pass == false

  nlohmann::json to_json() const;
};

// exact equivariance of the cover embedding:
// universal_embed(f . g) == extended_act(universal_embed(f), g), plus the
// projection identity pi(universal_embed(f)) == natural_embed(f)
CheckReport check_equivariance(const Field& f, std::size_t n, const VerifyOptions& opt);

// right-action law of the extended action on random (x, g1, g2)
CheckReport check_action_law(const Field& f, std::size_t n, const VerifyOptions& opt);

// lines map to rank-2 vector triples; injectivity on distinct flags.
// Exhaustive over prime fields, sampled otherwise (opt.samples lines per
// family and as many flag pairs).
CheckReport check_collinearity(const Field& f, std::size_t n, bool use_universal,
                               const VerifyOptions& opt);

// saturation dimension of span{universal_embed(flag)}; exhaustive for prime
// fields. Lower-bound semantics: reaching ceiling = drk + n^2 + 2n proves
// equality, stalling below it is reported as found.
struct DimensionReport {
  std::size_t dimension = 0;
  std::size_t ceiling = 0;
  bool reached_ceiling = false;
  std::size_t flags_used = 0;
  nlohmann::json to_json() const;
};
struct DimensionOptions {
  std::size_t budget = 1000;       // max flags sampled
  std::uint64_t seed = 1;
  std::size_t round_size = 50;     // flags per saturation round
  std::size_t stability_window = 3;  // stop after this many flat rounds
  SampleParams sample_params{};
};
DimensionReport dimension_report(const Field& f, std::size_t n, const DimensionOptions& opt);

// serialization helpers shared by reports
nlohmann::json flag_to_json(const Flag& f);
nlohmann::json matrix_to_json(const Matrix& m);
nlohmann::json extvec_to_json(const ExtendedVector& x);

}  // namespace rootgeo

#endif
