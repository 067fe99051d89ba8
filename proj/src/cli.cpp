#include "rootgeo/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "rootgeo/cohomology.hpp"
#include "rootgeo/ronan.hpp"

namespace rootgeo::cli {

namespace {

struct CommonOpts {
  std::string field = "q";
  std::size_t n = 2;
  std::uint64_t seed = 1;
  std::size_t samples = 500;
  unsigned degree_bound = 2;
  std::size_t word_length = 3;
};

void add_common(CLI::App* cmd, CommonOpts& c, bool field_required = true) {
  auto* f = cmd->add_option("--field", c.field, "field spec: fp:<p>, q, fp(t):<p>, q(t)");
  if (field_required) f->required();
  cmd->add_option("--n", c.n, "projective dimension n >= 2")->check(CLI::Range(2, 16));
  cmd->add_option("--seed", c.seed, "PRNG seed");
  cmd->add_option("--samples", c.samples, "sample count")->check(CLI::PositiveNumber);
  cmd->add_option("--degree-bound", c.degree_bound, "max degree of sampled polynomials");
  cmd->add_option("--word-length", c.word_length, "transvection word length of sampled group elements")
      ->check(CLI::PositiveNumber);
}

VerifyOptions verify_options(const CommonOpts& c) {
  VerifyOptions o;
  o.samples = c.samples;
  o.seed = c.seed;
  o.word_length = c.word_length;
  o.sample_params.degree_bound = c.degree_bound;
  return o;
}

std::optional<unsigned> threads_from_env() {
  const char* v = std::getenv("ROOTGEO_THREADS");
  if (!v) return std::nullopt;
  char* end = nullptr;
  unsigned long k = std::strtoul(v, &end, 10);
  if (end == v || *end != '\0' || k == 0) return std::nullopt;
  return static_cast<unsigned>(k);
}

nlohmann::json config_json(const CommonOpts& c) {
  nlohmann::json j{{"field", c.field},
                   {"n", c.n},
                   {"seed", c.seed},
                   {"samples", c.samples},
                   {"degree_bound", c.degree_bound},
                   {"word_length", c.word_length}};
  if (auto t = threads_from_env()) j["threads"] = *t;
  return j;
}

class Report {
 public:
  Report(const std::string& command) : start_(std::chrono::steady_clock::now()) {
    j_["schema"] = 1;
    j_["command"] = command;
  }
  nlohmann::json& json() { return j_; }
  int finish(std::ostream& out, bool pass) {
    j_["pass"] = pass;
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start_)
                  .count();
    j_["timing_ms"] = ms;
    out << j_.dump(2) << std::endl;
    return pass ? 0 : 1;
  }

 private:
  nlohmann::json j_;
  std::chrono::steady_clock::time_point start_;
};

int run_impl(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"long-root geometry of SL(n+1): embeddings, cocycles, covers"};
  app.require_subcommand(1);

  CommonOpts vc_act, vc_emb, vc_col, vc_dim, vc_coc, vc_split, vc_claim;

  auto* c_act = app.add_subcommand("verify-action", "right-action law of the extended action");
  add_common(c_act, vc_act);

  auto* c_emb = app.add_subcommand("verify-embedding", "exact equivariance of the cover embedding");
  add_common(c_emb, vc_emb);

  auto* c_col = app.add_subcommand("verify-collinearity", "lines map to rank-2 triples; injectivity");
  std::string col_embedding = "universal";
  add_common(c_col, vc_col);
  c_col->add_option("--embedding", col_embedding, "natural | universal")
      ->check(CLI::IsMember({"natural", "universal"}));

  auto* c_dim = app.add_subcommand("dimension-report", "saturation dimension of the cover embedding span");
  std::size_t dim_round = 50, dim_window = 3;
  add_common(c_dim, vc_dim);
  vc_dim.samples = 1000;
  c_dim->add_option("--round-size", dim_round, "flags per saturation round");
  c_dim->add_option("--window", dim_window, "stop after this many flat rounds");

  auto* c_coc = app.add_subcommand("cocycle-check", "cocycle law of the derivation cocycle f_d");
  std::size_t coc_omega = 0;
  add_common(c_coc, vc_coc);
  vc_coc.samples = 200;
  c_coc->add_option("--omega", coc_omega, "derivation basis index");

  auto* c_split = app.add_subcommand("extension-split", "split test of a central 1-extension");
  std::string split_source = "derivation", split_expect = "any", alpha_file;
  std::size_t split_omega = 0;
  add_common(c_split, vc_split);
  vc_split.samples = 24;
  c_split->add_option("--source", split_source, "derivation | coboundary | zero")
      ->check(CLI::IsMember({"derivation", "coboundary", "zero"}));
  c_split->add_option("--omega", split_omega, "derivation basis index for --source derivation");
  c_split->add_option("--alpha-file", alpha_file,
                      "matrix text file for the coboundary functional (default: sampled)");
  c_split->add_option("--expect", split_expect, "split | nonsplit | any")
      ->check(CLI::IsMember({"split", "nonsplit", "any"}));

  auto* c_claim = app.add_subcommand("claim-witness", "exact non-coboundary witness traces");
  std::size_t claim_omega = 0;
  add_common(c_claim, vc_claim);
  c_claim->add_option("--omega", claim_omega, "derivation basis index");

  auto* c_ronan = app.add_subcommand("ronan-cover", "universal cover of a finite instance by gluing");
  std::size_t ronan_n = 2;
  std::uint64_t ronan_q = 2;
  std::string ronan_embedding = "natural";
  c_ronan->add_option("--n", ronan_n, "projective dimension")->required()->check(CLI::Range(2, 8));
  c_ronan->add_option("--q", ronan_q, "prime field order")->required();
  c_ronan->add_option("--embedding", ronan_embedding, "input embedding")
      ->check(CLI::IsMember({"natural"}));

  auto* c_enum = app.add_subcommand("enumerate", "incidence dump of a finite instance");
  std::size_t enum_n = 2;
  std::uint64_t enum_q = 2;
  c_enum->add_option("--n", enum_n, "projective dimension")->required()->check(CLI::Range(2, 8));
  c_enum->add_option("--q", enum_q, "prime field order")->required();

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    return 2;
  }

  if (c_act->parsed()) {
    Report rep("verify-action");
    rep.json()["config"] = config_json(vc_act);
    CheckReport r = check_action_law(Field::parse(vc_act.field), vc_act.n, verify_options(vc_act));
    rep.json()["result"] = r.to_json();
    return rep.finish(out, r.pass);
  }

  if (c_emb->parsed()) {
    Report rep("verify-embedding");
    rep.json()["config"] = config_json(vc_emb);
    CheckReport r = check_equivariance(Field::parse(vc_emb.field), vc_emb.n, verify_options(vc_emb));
    rep.json()["result"] = r.to_json();
    return rep.finish(out, r.pass);
  }

  if (c_col->parsed()) {
    Report rep("verify-collinearity");
    rep.json()["config"] = config_json(vc_col);
    rep.json()["config"]["embedding"] = col_embedding;
    CheckReport r = check_collinearity(Field::parse(vc_col.field), vc_col.n,
                                       col_embedding == "universal", verify_options(vc_col));
    rep.json()["result"] = r.to_json();
    return rep.finish(out, r.pass);
  }

  if (c_dim->parsed()) {
    Report rep("dimension-report");
    rep.json()["config"] = config_json(vc_dim);
    DimensionOptions o;
    o.budget = vc_dim.samples;
    o.seed = vc_dim.seed;
    o.round_size = dim_round;
    o.stability_window = dim_window;
    o.sample_params.degree_bound = vc_dim.degree_bound;
    DimensionReport r = dimension_report(Field::parse(vc_dim.field), vc_dim.n, o);
    rep.json()["result"] = r.to_json();
    rep.json()["dimension"] = r.dimension;
    return rep.finish(out, true);  // informational
  }

  if (c_coc->parsed()) {
    Report rep("cocycle-check");
    rep.json()["config"] = config_json(vc_coc);
    Field f = Field::parse(vc_coc.field);
    Cocycle1 c = Cocycle1::from_derivation(f, vc_coc.n + 1, coc_omega);
    CheckReport r = verify_cocycle_law(c, vc_coc.n, verify_options(vc_coc));
    rep.json()["result"] = r.to_json();
    return rep.finish(out, r.pass);
  }

  if (c_split->parsed()) {
    Report rep("extension-split");
    rep.json()["config"] = config_json(vc_split);
    rep.json()["config"]["source"] = split_source;
    Field f = Field::parse(vc_split.field);
    std::size_t np1 = vc_split.n + 1;
    auto make_cocycle = [&]() -> Cocycle1 {
      if (split_source == "derivation") return Cocycle1::from_derivation(f, np1, split_omega);
      if (split_source == "zero") {
        DerivationSpec d;
        d.coeffs.assign(f.derivation_rank(), f.zero());
        return Cocycle1::from_derivation_spec(f, np1, std::move(d));
      }
      Matrix alpha_rep(f, np1, np1);
      if (!alpha_file.empty()) {
        std::ifstream in(alpha_file);
        if (!in) throw ParseError("cannot read " + alpha_file);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        alpha_rep = Matrix::from_text(f, text);
      } else {
        Rng rng(vc_split.seed + 0x5eedULL);
        SampleParams sp;
        sp.degree_bound = vc_split.degree_bound;
        for (std::size_t i = 0; i < np1; ++i)
          for (std::size_t j = 0; j < np1; ++j) alpha_rep.at(i, j) = f.sample(rng, sp);
      }
      return Cocycle1::coboundary(DualVector(std::move(alpha_rep)));
    };
    CentralExtension u = build_extension(make_cocycle());
    SplitSchedule sched;
    sched.batch_size = vc_split.samples;
    SplitOutcome o = split_test(u, vc_split.n, sched, verify_options(vc_split));
    rep.json()["result"] = o.to_json();
    bool pass = true;
    if (split_expect == "split") pass = o.verdict == SplitOutcome::Verdict::SplitWitness;
    if (split_expect == "nonsplit") pass = o.verdict == SplitOutcome::Verdict::NonSplitCertificate;
    return rep.finish(out, pass);
  }

  if (c_claim->parsed()) {
    Report rep("claim-witness");
    rep.json()["config"] = config_json(vc_claim);
    ClaimWitnessReport r = claim_witness(Field::parse(vc_claim.field), vc_claim.n, claim_omega);
    rep.json()["result"] = r.to_json();
    return rep.finish(out, r.pass);
  }

  if (c_ronan->parsed()) {
    Report rep("ronan-cover");
    rep.json()["config"] = {{"n", ronan_n}, {"q", ronan_q}, {"embedding", ronan_embedding}};
    if (auto t = threads_from_env()) rep.json()["config"]["threads"] = *t;
    Geometry geo = Geometry::enumerate(ronan_n, ronan_q);
    GeometryDump dump = geo.dump();
    EmbeddingTable emb = natural_embedding_table(dump);
    auto [rs, rel] = build_ronan(dump, emb);
    std::size_t relation_rank = rank(rel.rows);
    std::size_t cover_dim = rs.total_dim - relation_rank;
    ProjectionReport proj = cover_projection(dump, emb, rs, rel);
    bool projection_ok = proj.relations_killed && proj.flag_blocks_ok &&
                         proj.quotient_bijective && proj.quotient_lines_ok;
    rep.json()["total_dim"] = rs.total_dim;
    rep.json()["relation_rank"] = relation_rank;
    rep.json()["cover_dim"] = cover_dim;
    rep.json()["projection_ok"] = projection_ok;
    rep.json()["projection"] = proj.to_json();
    bool pass = projection_ok;
    if (ronan_n == 2 && ronan_q == 2) {
      LiftReport lift = lift_check(geo, emb, rs, rel);
      rep.json()["lift_ok"] = lift.ok;
      rep.json()["lift"] = lift.to_json();
      pass = pass && lift.ok;
    } else {
      rep.json()["lift_ok"] = nullptr;
    }
    return rep.finish(out, pass);
  }

  if (c_enum->parsed()) {
    Report rep("enumerate");
    Geometry geo = Geometry::enumerate(enum_n, enum_q);
    rep.json()["config"] = {{"n", enum_n}, {"q", enum_q}};
    rep.json()["geometry"] = geo.dump().to_json();
    rep.json()["flag_count"] = geo.flags().size();
    rep.json()["line_count"] = geo.lines().size();
    return rep.finish(out, true);
  }

  err << "no subcommand selected\n";
  return 2;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run_impl(args, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "unexpected error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace rootgeo::cli
