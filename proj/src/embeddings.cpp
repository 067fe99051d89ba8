#include "rootgeo/embeddings.hpp"

namespace rootgeo {

// ---------------------------------------------------------------------------
// ExtendedVector
// ---------------------------------------------------------------------------

ExtendedVector::ExtendedVector(std::map<std::size_t, FieldElem> m_, TracelessMatrix a_)
    : m(std::move(m_)), a(std::move(a_)) {
  for (auto it = m.begin(); it != m.end();) {
    if (it->first >= a.matrix().field().derivation_rank())
      throw IndexOutOfRange("m-coordinate index outside the derivation basis");
    it = it->second.is_zero() ? m.erase(it) : std::next(it);
  }
}

bool ExtendedVector::operator==(const ExtendedVector& o) const {
  return m == o.m && a == o.a;
}

Matrix ExtendedVector::coords() const {
  const Field& f = a.matrix().field();
  const std::size_t drk = f.derivation_rank();
  const std::size_t sq = a.size() * a.size();
  Matrix r(f, 1, drk + sq);
  for (const auto& [w, c] : m) r.at(0, w) = c;
  Matrix flat = a.matrix().flatten();
  for (std::size_t k = 0; k < sq; ++k) r.at(0, drk + k) = flat.at(0, k);
  return r;
}

// ---------------------------------------------------------------------------
// the embeddings
// ---------------------------------------------------------------------------

TracelessMatrix natural_embed(const Flag& f) { return TracelessMatrix(f.lambda() * f.v()); }

ExtendedVector universal_embed(const Flag& f) {
  const Field& fld = f.field();
  std::map<std::size_t, FieldElem> m;
  for (std::size_t w = 0; w < fld.derivation_rank(); ++w) {
    Matrix dl = derive_matrix(f.lambda(), w);
    FieldElem c = (f.v() * dl).at(0, 0);
    if (!c.is_zero()) m.emplace(w, std::move(c));
  }
  return ExtendedVector(std::move(m), natural_embed(f));
}

ExtendedVector extended_act(const ExtendedVector& x, const GroupElem& g) {
  if (x.a.size() != g.size()) throw DimensionMismatch("extended_act size mismatch");
  const Field& f = g.field();
  std::map<std::size_t, FieldElem> m = x.m;
  for (std::size_t w = 0; w < f.derivation_rank(); ++w) {
    Matrix dginv = derive_matrix(g.inverse(), w);
    if (dginv.is_zero()) continue;  // omega outside the support of g's entries
    FieldElem c = (g.matrix() * dginv * x.a.matrix()).trace();
    if (c.is_zero()) continue;
    auto it = m.find(w);
    if (it == m.end()) {
      m.emplace(w, std::move(c));
    } else {
      it->second = it->second + c;
      if (it->second.is_zero()) m.erase(it);
    }
  }
  return ExtendedVector(std::move(m), adjoint(g, x.a));
}

// ---------------------------------------------------------------------------
// samplers
// ---------------------------------------------------------------------------

TracelessMatrix sample_traceless(const Field& f, std::size_t n_plus_1, Rng& rng,
                                 const SampleParams& sp) {
  Matrix m(f, n_plus_1, n_plus_1);
  FieldElem diag_sum = f.zero();
  for (std::size_t i = 0; i < n_plus_1; ++i)
    for (std::size_t j = 0; j < n_plus_1; ++j) {
      if (i == n_plus_1 - 1 && j == n_plus_1 - 1) break;
      m.at(i, j) = f.sample(rng, sp);
      if (i == j) diag_sum = diag_sum + m.at(i, j);
    }
  m.at(n_plus_1 - 1, n_plus_1 - 1) = -diag_sum;
  return TracelessMatrix(std::move(m));
}

ExtendedVector sample_extended(const Field& f, std::size_t n_plus_1, Rng& rng,
                               const SampleParams& sp) {
  std::map<std::size_t, FieldElem> m;
  for (std::size_t w = 0; w < f.derivation_rank(); ++w) {
    FieldElem c = f.sample(rng, sp);
    if (!c.is_zero()) m.emplace(w, std::move(c));
  }
  return ExtendedVector(std::move(m), sample_traceless(f, n_plus_1, rng, sp));
}

GeomLine sample_line(const Field& f, std::size_t n, Rng& rng, GeomLine::Family family,
                     const SampleParams& sp) {
  for (int tries = 0; tries < 10000; ++tries) {
    Flag fl = sample_flag(f, n, rng, sp);
    if (family == GeomLine::Family::PointPencil) {
      // second functional vanishing on the point, independent of lambda
      Subspace ann = kernel(fl.v());
      Matrix mu(f, 1, n + 1);
      for (std::size_t r = 0; r < ann.dim(); ++r)
        mu = mu + ann.basis().row(r).scaled(f.sample(rng, sp));
      Matrix pencil = fl.lambda().transpose().vstack(mu);
      if (rank(pencil) != 2) continue;
      return GeomLine(family, fl.v(), std::move(pencil));
    }
    // second point inside the hyperplane, independent of v
    Subspace hyp = kernel(fl.lambda().transpose());
    Matrix w(f, 1, n + 1);
    for (std::size_t r = 0; r < hyp.dim(); ++r)
      w = w + hyp.basis().row(r).scaled(f.sample(rng, sp));
    Matrix pencil = fl.v().vstack(w);
    if (rank(pencil) != 2) continue;
    return GeomLine(family, fl.lambda().transpose(), std::move(pencil));
  }
  throw Error("line sampler exhausted its retry budget");
}

// ---------------------------------------------------------------------------
// report helpers
// ---------------------------------------------------------------------------

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(m.at(i, j).to_string());
    rows.push_back(std::move(r));
  }
  return rows;
}

nlohmann::json flag_to_json(const Flag& f) {
  nlohmann::json v = nlohmann::json::array(), lam = nlohmann::json::array();
  for (std::size_t k = 0; k < f.size(); ++k) {
    v.push_back(f.v().at(0, k).to_string());
    lam.push_back(f.lambda().at(k, 0).to_string());
  }
  return {{"v", v}, {"lambda", lam}};
}

nlohmann::json extvec_to_json(const ExtendedVector& x) {
  nlohmann::json m = nlohmann::json::object();
  for (const auto& [w, c] : x.m) m[std::to_string(w)] = c.to_string();
  return {{"m", m}, {"a", matrix_to_json(x.a.matrix())}};
}

nlohmann::json CheckReport::to_json() const {
  nlohmann::json j;
  j["check"] = check;
  j["pass"] = pass;
  j["samples"] = samples_run;
  if (!details.is_null()) j["details"] = details;
  if (!counterexample.is_null()) j["counterexample"] = counterexample;
  return j;
}

nlohmann::json DimensionReport::to_json() const {
  return {{"dimension", dimension},
          {"ceiling", ceiling},
          {"reached_ceiling", reached_ceiling},
          {"flags_used", flags_used}};
}

// ---------------------------------------------------------------------------
// verification drivers
// ---------------------------------------------------------------------------

CheckReport check_equivariance(const Field& f, std::size_t n, const VerifyOptions& opt) {
  CheckReport rep;
  rep.check = "equivariance";
  Rng rng(opt.seed);
  for (std::size_t s = 0; s < opt.samples; ++s) {
    Flag fl = sample_flag(f, n, rng, opt.sample_params);
    GroupElem g = sample_element(f, n + 1, rng, opt.word_length, opt.sample_params);
    ExtendedVector lhs = universal_embed(act_on_flag(fl, g));
    ExtendedVector emb = universal_embed(fl);
    ExtendedVector rhs = extended_act(emb, g);
    bool projection_ok = emb.a == natural_embed(fl);
    if (lhs != rhs || !projection_ok) {
      rep.pass = false;
      rep.samples_run = s + 1;
      rep.counterexample = {{"flag", flag_to_json(fl)},
                            {"g", matrix_to_json(g.matrix())},
                            {"lhs", extvec_to_json(lhs)},
                            {"rhs", extvec_to_json(rhs)},
                            {"projection_ok", projection_ok}};
      return rep;
    }
  }
  rep.samples_run = opt.samples;
  return rep;
}

CheckReport check_action_law(const Field& f, std::size_t n, const VerifyOptions& opt) {
  CheckReport rep;
  rep.check = "action_law";
  Rng rng(opt.seed);
  for (std::size_t s = 0; s < opt.samples; ++s) {
    ExtendedVector x = sample_extended(f, n + 1, rng, opt.sample_params);
    GroupElem g1 = sample_element(f, n + 1, rng, opt.word_length, opt.sample_params);
    GroupElem g2 = sample_element(f, n + 1, rng, opt.word_length, opt.sample_params);
    ExtendedVector lhs = extended_act(extended_act(x, g1), g2);
    ExtendedVector rhs = extended_act(x, g1 * g2);
    if (lhs != rhs) {
      rep.pass = false;
      rep.samples_run = s + 1;
      rep.counterexample = {{"x", extvec_to_json(x)},
                            {"g1", matrix_to_json(g1.matrix())},
                            {"g2", matrix_to_json(g2.matrix())},
                            {"lhs", extvec_to_json(lhs)},
                            {"rhs", extvec_to_json(rhs)}};
      return rep;
    }
  }
  rep.samples_run = opt.samples;
  return rep;
}

namespace {

Matrix embed_coords(const Flag& fl, bool use_universal) {
  if (use_universal) return universal_embed(fl).coords();
  return natural_embed(fl).matrix().flatten();
}

}  // namespace

CheckReport check_collinearity(const Field& f, std::size_t n, bool use_universal,
                               const VerifyOptions& opt) {
  CheckReport rep;
  rep.check = "collinearity";
  std::size_t lines_checked = 0, pairs_checked = 0;

  auto line_ok = [&](const std::vector<Flag>& on_line) {
    Matrix stack = embed_coords(on_line[0], use_universal);
    for (std::size_t i = 1; i < on_line.size(); ++i)
      stack = stack.vstack(embed_coords(on_line[i], use_universal));
    return rank(stack) == 2;
  };
  auto fail_line = [&](const std::vector<Flag>& on_line) {
    nlohmann::json fls = nlohmann::json::array();
    for (const Flag& fl : on_line) fls.push_back(flag_to_json(fl));
    rep.pass = false;
    rep.counterexample = {{"kind", "line_not_rank_2"}, {"flags", fls}};
  };

  if (f.spec().kind == FieldKind::Prime) {
    Geometry geo = Geometry::enumerate(n, f.spec().p);
    for (std::size_t li = 0; li < geo.lines().size(); ++li) {
      std::vector<Flag> on_line;
      for (std::size_t fi : geo.line_flags()[li]) on_line.push_back(geo.flags()[fi]);
      ++lines_checked;
      if (!line_ok(on_line)) {
        fail_line(on_line);
        return rep;
      }
    }
    // injectivity: distinct flags have non-proportional images
    for (std::size_t a = 0; a < geo.flags().size(); ++a)
      for (std::size_t b = a + 1; b < geo.flags().size(); ++b) {
        ++pairs_checked;
        Matrix stack = embed_coords(geo.flags()[a], use_universal)
                           .vstack(embed_coords(geo.flags()[b], use_universal));
        if (rank(stack) != 2) {
          rep.pass = false;
          rep.counterexample = {{"kind", "images_proportional"},
                                {"flag_a", flag_to_json(geo.flags()[a])},
                                {"flag_b", flag_to_json(geo.flags()[b])}};
          return rep;
        }
      }
  } else {
    Rng rng(opt.seed);
    for (GeomLine::Family fam :
         {GeomLine::Family::PointPencil, GeomLine::Family::HyperplanePencil}) {
      for (std::size_t s = 0; s < opt.samples; ++s) {
        GeomLine line = sample_line(f, n, rng, fam, opt.sample_params);
        // three pairwise non-proportional flags on the line
        Matrix r0 = line.pencil.row(0), r1 = line.pencil.row(1);
        std::vector<Matrix> moving = {r0, r1, r0 + r1};
        std::vector<Flag> on_line;
        for (const Matrix& mv : moving)
          on_line.push_back(fam == GeomLine::Family::PointPencil
                                ? Flag(line.anchor, mv.transpose())
                                : Flag(mv, line.anchor.transpose()));
        ++lines_checked;
        if (!line_ok(on_line)) {
          fail_line(on_line);
          return rep;
        }
      }
    }
    for (std::size_t s = 0; s < opt.samples; ++s) {
      Flag a = sample_flag(f, n, rng, opt.sample_params);
      Flag b = sample_flag(f, n, rng, opt.sample_params);
      if (a.proj_equal(b)) continue;
      ++pairs_checked;
      Matrix stack =
          embed_coords(a, use_universal).vstack(embed_coords(b, use_universal));
      if (rank(stack) != 2) {
        rep.pass = false;
        rep.counterexample = {{"kind", "images_proportional"},
                              {"flag_a", flag_to_json(a)},
                              {"flag_b", flag_to_json(b)}};
        return rep;
      }
    }
  }
  rep.samples_run = lines_checked;
  rep.details = {{"lines_checked", lines_checked}, {"flag_pairs_checked", pairs_checked}};
  return rep;
}

DimensionReport dimension_report(const Field& f, std::size_t n, const DimensionOptions& opt) {
  DimensionReport rep;
  const std::size_t drk = f.derivation_rank();
  const std::size_t width = drk + (n + 1) * (n + 1);
  rep.ceiling = drk + n * n + 2 * n;

  // Over Q(t) the span is accumulated after specializing at t = tau: any
  // dependency over Q(t) survives specialization, so the specialized rank is
  // a certified lower bound and hitting the ceiling still proves spanning.
  // (Lower-bound semantics are the contract; the exact generic-t span of the
  // same vectors swells far beyond desk scale at n = 3.)
  const bool specialize = f.spec().kind == FieldKind::RationalsFunction;
  Field base = specialize ? Field(FieldSpec{FieldKind::Rationals, 0}) : f;
  FieldElem tau = specialize ? base.from_int(2) : f.zero();
  auto coords_of = [&](const Flag& fl) -> std::optional<Matrix> {
    Matrix c = universal_embed(fl).coords();
    if (!specialize) return c;
    Matrix s(base, 1, width);
    try {
      for (std::size_t j = 0; j < width; ++j) s.at(0, j) = evaluate_at(c.at(0, j), tau);
    } catch (const DivisionByZero&) {
      return std::nullopt;  // pole at tau: skip this flag
    }
    return s;
  };

  SpanBuilder span(specialize ? base : f, width);
  if (f.spec().kind == FieldKind::Prime) {
    Geometry geo = Geometry::enumerate(n, f.spec().p);
    for (const Flag& fl : geo.flags()) {
      span.insert(universal_embed(fl).coords());
      ++rep.flags_used;
    }
  } else {
    Rng rng(opt.seed);
    std::size_t flat_rounds = 0;
    while (rep.flags_used < opt.budget && flat_rounds < opt.stability_window &&
           span.dim() < rep.ceiling) {
      std::size_t before = span.dim();
      for (std::size_t k = 0; k < opt.round_size && rep.flags_used < opt.budget; ++k) {
        Flag fl = sample_flag(f, n, rng, opt.sample_params);
        ++rep.flags_used;
        if (auto c = coords_of(fl)) span.insert(std::move(*c));
        if (span.dim() == rep.ceiling) break;  // ceiling is a proof of spanning
      }
      flat_rounds = span.dim() == before ? flat_rounds + 1 : 0;
    }
  }
  rep.dimension = span.dim();
  rep.reached_ceiling = rep.dimension == rep.ceiling;
  return rep;
}

}  // namespace rootgeo
