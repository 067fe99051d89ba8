#ifndef ROOTGEO_COHOMOLOGY_HPP
#define ROOTGEO_COHOMOLOGY_HPP

#include <functional>
#include <optional>

#include "rootgeo/embeddings.hpp"

namespace rootgeo {

// ---------------------------------------------------------------------------
// A* as matrices modulo scalars.
//
// A dual vector is carried by any representative b of the coset b + <I>;
// it evaluates through the trace pairing alpha(a) = Tr(b a). Equality is
// decided by evaluation on a basis of A, never by comparing representatives:
// when char K divides n+1 the scalar matrices are themselves traceless and a
// canonical trace-zero representative does not exist.
// ---------------------------------------------------------------------------

class DualVector {
 public:
  explicit DualVector(Matrix rep);
  static DualVector zero(const Field& f, std::size_t n_plus_1);

  FieldElem eval(const TracelessMatrix& a) const { return trace_pair(rep_, a); }
  // dual action (xi . g)(a) = xi(a . g^{-1}): representatives conjugate
  DualVector acted(const GroupElem& g) const;

  DualVector operator+(const DualVector& o) const { return DualVector(rep_ + o.rep_); }
  DualVector operator-(const DualVector& o) const { return DualVector(rep_ - o.rep_); }
  DualVector operator-() const { return DualVector(-rep_); }
  DualVector scaled(const FieldElem& k) const { return DualVector(rep_.scaled(k)); }

  bool same_functional(const DualVector& o) const;
  bool is_zero_functional() const;

  // trace-normalized representative when char does not divide n+1,
  // otherwise the stored representative unchanged
  Matrix canonical_rep() const;
  const Matrix& rep() const { return rep_; }
  std::size_t size() const { return rep_.rows(); }

 private:
  Matrix rep_;
};

// basis of A: e_{i,j} (i != j) then h_i = e_{i,i} - e_{i+1,i+1}
std::vector<TracelessMatrix> adjoint_basis(const Field& f, std::size_t n_plus_1);
// coordinates of a traceless matrix in that basis, as a 1 x dim(A) row
Matrix adjoint_coords(const TracelessMatrix& a);

// a derivation d = sum_omega c_omega d_omega (coeffs length = derivation rank;
// the empty combination over a rank-0 field is the null derivation)
struct DerivationSpec {
  std::vector<FieldElem> coeffs;
  Matrix apply(const Matrix& m) const;  // entrywise d
  bool is_null() const;
};

// ---------------------------------------------------------------------------
// 1-cochains G -> A* given functionally.
// ---------------------------------------------------------------------------

class Cocycle1 {
 public:
  enum class Kind { FromDerivation, Coboundary, TableBacked, Composite };

  DualVector operator()(const GroupElem& g) const { return eval_(g); }
  Kind kind() const { return kind_; }
  const Field& field() const { return field_; }
  std::size_t size() const { return n_plus_1_; }
  const std::optional<DerivationSpec>& derivation() const { return dspec_; }

  // f_d(g)(a) = Tr(g^{-1} d(g) a); NoDerivations when Omega is empty
  static Cocycle1 from_derivation(const Field& f, std::size_t n_plus_1, std::size_t omega);
  // same for a general combination; the empty combination gives the zero cocycle
  static Cocycle1 from_derivation_spec(const Field& f, std::size_t n_plus_1, DerivationSpec d);
  // g -> alpha . g - alpha
  static Cocycle1 coboundary(DualVector alpha);
  // finite explicit table keyed by the matrix text of g
  static Cocycle1 table_backed(const Field& f, std::size_t n_plus_1,
                               std::map<std::string, Matrix> table);
  // arbitrary evaluator (sums, extracted cocycles)
  static Cocycle1 composite(const Field& f, std::size_t n_plus_1,
                            std::function<DualVector(const GroupElem&)> eval);

  Cocycle1 plus_coboundary(const DualVector& alpha) const;
  Cocycle1 scaled(const FieldElem& k) const;

 private:
  Cocycle1(Kind k, Field f, std::size_t np1, std::function<DualVector(const GroupElem&)> ev)
      : kind_(k), field_(std::move(f)), n_plus_1_(np1), eval_(std::move(ev)) {}
  Kind kind_;
  Field field_;
  std::size_t n_plus_1_;
  std::function<DualVector(const GroupElem&)> eval_;
  std::optional<DerivationSpec> dspec_;
};

// ---------------------------------------------------------------------------
// central 1-extensions U_phi realized on K x A with
//   (t, a) . g = (t + phi(a, g), a . g),   phi(a, g) = f(g^{-1})(a)
// ---------------------------------------------------------------------------

class CentralExtension {
 public:
  explicit CentralExtension(Cocycle1 f);

  const Cocycle1& cocycle() const { return f_; }
  const Field& field() const { return f_.field(); }
  std::size_t size() const { return f_.size(); }

  FieldElem phi(const TracelessMatrix& a, const GroupElem& g) const;
  std::pair<FieldElem, TracelessMatrix> act(const FieldElem& t, const TracelessMatrix& a,
                                            const GroupElem& g) const;

  // randomized check of phi(a, g1 g2) = phi(a, g1) + phi(a.g1, g2)
  CheckReport verify_action_law(std::size_t n, const VerifyOptions& opt) const;

 private:
  Cocycle1 f_;
};

Cocycle1 cocycle_from_derivation(const Field& f, std::size_t n_plus_1, std::size_t omega);
Cocycle1 coboundary(DualVector alpha);
CentralExtension build_extension(Cocycle1 f);

// Cocycle of the complement X = {(mu(a), a)}: f_X = f - coboundary(mu).
Cocycle1 extract_cocycle(const CentralExtension& u, const DualVector& mu);
// Complement given by a spanning set of carrier vectors (t_i, a_i); throws
// NotAComplement when they do not form a complement of the kernel line.
Cocycle1 extract_cocycle(const CentralExtension& u,
                         const std::vector<std::pair<FieldElem, TracelessMatrix>>& complement);

// ---------------------------------------------------------------------------
// splitness
// ---------------------------------------------------------------------------

struct SplitSchedule {
  std::size_t batch_size = 24;
  std::size_t max_batches = 6;
  std::size_t validation_samples = 32;
  bool inject_witness = true;  // seed the stream with the diagonal witness pair
};

struct SplitOutcome {
  enum class Verdict { SplitWitness, NonSplitCertificate, Undetermined };
  Verdict verdict = Verdict::Undetermined;
  std::optional<DualVector> witness;  // validated splitting functional
  // certificate of inconsistency: combination y over the sampled rows with
  // y * rows = 0 and y * rhs = contradiction != 0
  nlohmann::json certificate;
  nlohmann::json to_json() const;
};

SplitOutcome split_test(const CentralExtension& u, std::size_t n, const SplitSchedule& sched,
                        const VerifyOptions& opt);

// ---------------------------------------------------------------------------
// the diagonal witness: g = diag(t, t^{-1}, 1, ...), g' = diag(1, t, t^{-1}, 1, ...)
// ---------------------------------------------------------------------------

struct ClaimWitnessReport {
  bool vacuous = false;  // Omega empty: the null derivation, both traces 0
  bool commute = false;
  bool traces_equal = false;
  bool left_matches = false;   // Tr(g^{-1} d(g) g)  == (1 - t^{-2}) d(t)
  bool right_matches = false;  // Tr(g^{-1} d(g) g') == (t^{-1} - 1) d(t)
  bool discriminant_nonzero = false;  // (2 - t^{-2} - t^{-1}) d(t) != 0
  std::string left, right, discriminant;
  bool pass = false;
  nlohmann::json to_json() const;
};

// RequiresN3 when n < 2 (g' needs three diagonal slots)
ClaimWitnessReport claim_witness(const Field& f, std::size_t n, std::size_t omega = 0);

// the witness pair (a0, g0) = (g - g', g) used to certify non-splitness
std::pair<TracelessMatrix, GroupElem> claim_witness_pair(const Field& f, std::size_t n,
                                                         std::size_t omega = 0);

// rigid-isomorphism identity phi(a,g) + lambda(a.g) == lambda(a) + phi'(a,g) on samples
bool rigid_isomorphism_check(const CentralExtension& u, const CentralExtension& u2,
                             const DualVector& lambda, std::size_t n, const VerifyOptions& opt);

// randomized check of the cocycle law f(g1 g2) = f(g1).g2 + f(g2) together
// with the normalization f(1) = 0, comparing values as functionals
CheckReport verify_cocycle_law(const Cocycle1& c, std::size_t n, const VerifyOptions& opt);

}  // namespace rootgeo

#endif
