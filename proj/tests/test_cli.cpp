#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rootgeo/cli.hpp"

namespace {

struct RunOut {
  int code;
  nlohmann::json json;
  std::string err;
};

RunOut run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = rootgeo::cli::run(args, out, err);
  RunOut r{code, nlohmann::json(), err.str()};
  if (!out.str().empty() && out.str()[0] == '{') r.json = nlohmann::json::parse(out.str());
  return r;
}

}  // namespace

TEST_CASE("usage errors exit with 2 and a diagnostic") {
  RunOut r = run_cli({"no-such-command"});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
  RunOut r2 = run_cli({"verify-embedding"});  // missing --field
  CHECK(r2.code == 2);
  RunOut r3 = run_cli({"verify-embedding", "--field", "fp:6", "--samples", "1"});
  CHECK(r3.code == 2);  // non-prime modulus
  RunOut r4 = run_cli({"cocycle-check", "--field", "q", "--samples", "1"});
  CHECK(r4.code == 2);  // no derivations over Q
}

TEST_CASE("reports are byte-identical for a fixed seed, modulo timing") {
  std::vector<std::string> args = {"claim-witness", "--field", "fp(t):5", "--n", "2"};
  RunOut a = run_cli(args), b = run_cli(args);
  REQUIRE(a.code == 0);
  a.json.erase("timing_ms");
  b.json.erase("timing_ms");
  CHECK(a.json == b.json);
  CHECK(a.json["schema"] == 1);
  CHECK(a.json["config"]["field"] == "fp(t):5");
}

TEST_CASE("ronan-cover reports the pinned dimensions for (2,2)") {
  RunOut r = run_cli({"ronan-cover", "--n", "2", "--q", "2"});
  REQUIRE(r.code == 0);
  CHECK(r.json["total_dim"] == 49);
  CHECK(r.json["relation_rank"] == 41);
  CHECK(r.json["cover_dim"] == 8);
  CHECK(r.json["projection_ok"] == true);
  CHECK(r.json["lift_ok"] == true);
  CHECK(r.json["pass"] == true);
}

TEST_CASE("dimension-report over the rationals saturates at 8") {
  RunOut r = run_cli({"dimension-report", "--field", "q", "--n", "2", "--seed", "5"});
  REQUIRE(r.code == 0);
  CHECK(r.json["dimension"] == 8);
  CHECK(r.json["result"]["reached_ceiling"] == true);
}

TEST_CASE("verify-embedding passes over F_5(t)") {
  RunOut r = run_cli({"verify-embedding", "--field", "fp(t):5", "--n", "2", "--samples", "40",
                      "--seed", "7"});
  REQUIRE(r.code == 0);
  CHECK(r.json["pass"] == true);
  CHECK(r.json["result"]["samples"] == 40);
}

TEST_CASE("verify-action and verify-collinearity pass on small budgets") {
  RunOut a = run_cli({"verify-action", "--field", "fp(t):5", "--n", "2", "--samples", "25",
                      "--seed", "11"});
  CHECK(a.code == 0);
  RunOut c = run_cli({"verify-collinearity", "--field", "fp:2", "--n", "2"});
  CHECK(c.code == 0);
  CHECK(c.json["result"]["details"]["lines_checked"] == 14);
  // derivation-free fields exercise the collapsed action
  RunOut p = run_cli({"verify-action", "--field", "fp:5", "--n", "2", "--samples", "25",
                      "--seed", "11"});
  CHECK(p.code == 0);
}

TEST_CASE("verification reports reproduce byte-for-byte per seed") {
  std::vector<std::string> args = {"verify-embedding", "--field", "fp(t):5", "--n", "2",
                                   "--samples", "15", "--seed", "23"};
  RunOut a = run_cli(args), b = run_cli(args);
  a.json.erase("timing_ms");
  b.json.erase("timing_ms");
  CHECK(a.json == b.json);
}

TEST_CASE("extension-split verdicts respect --expect") {
  RunOut split = run_cli({"extension-split", "--field", "fp(t):5", "--n", "2", "--source",
                          "coboundary", "--expect", "split", "--seed", "13"});
  CHECK(split.code == 0);
  CHECK(split.json["result"]["verdict"] == "split_witness");

  RunOut nonsplit = run_cli({"extension-split", "--field", "fp(t):5", "--n", "2", "--source",
                             "derivation", "--expect", "nonsplit", "--seed", "13"});
  CHECK(nonsplit.code == 0);
  CHECK(nonsplit.json["result"]["verdict"] == "non_split_certificate");
  CHECK(nonsplit.json["result"].contains("certificate"));

  RunOut wrong = run_cli({"extension-split", "--field", "fp(t):5", "--n", "2", "--source",
                          "derivation", "--expect", "split", "--seed", "13"});
  CHECK(wrong.code == 1);  // verdict contradicts the expectation
}

TEST_CASE("extension-split reads the coboundary functional from a matrix file") {
  const char* path = "alpha_fixture.txt";
  {
    std::ofstream f(path);
    f << "0 1 0\n0 0 0\n(t)/(t^2+1) 0 0\n";
  }
  RunOut r = run_cli({"extension-split", "--field", "fp(t):5", "--n", "2", "--source",
                      "coboundary", "--alpha-file", path, "--expect", "split", "--seed", "17"});
  CHECK(r.code == 0);
  CHECK(r.json["result"]["verdict"] == "split_witness");
  std::remove(path);
}

TEST_CASE("claim-witness over q is vacuous and passes") {
  RunOut r = run_cli({"claim-witness", "--field", "q", "--n", "2"});
  REQUIRE(r.code == 0);
  CHECK(r.json["result"]["vacuous"] == true);
}

TEST_CASE("enumerate emits the incidence dump") {
  RunOut r = run_cli({"enumerate", "--n", "2", "--q", "2"});
  REQUIRE(r.code == 0);
  CHECK(r.json["flag_count"] == 21);
  CHECK(r.json["line_count"] == 14);
  CHECK(r.json["geometry"]["flags"].size() == 21);
  CHECK(r.json["geometry"]["lines"].size() == 14);
  RunOut bad = run_cli({"enumerate", "--n", "2", "--q", "4"});
  CHECK(bad.code == 2);
}

TEST_CASE("cocycle-check passes over function fields") {
  RunOut r = run_cli({"cocycle-check", "--field", "q(t)", "--n", "2", "--samples", "30",
                      "--seed", "19"});
  REQUIRE(r.code == 0);
  CHECK(r.json["pass"] == true);
}

TEST_CASE("ROOTGEO_THREADS is accepted and echoed in the config") {
  setenv("ROOTGEO_THREADS", "2", 1);
  RunOut r = run_cli({"claim-witness", "--field", "q", "--n", "2"});
  unsetenv("ROOTGEO_THREADS");
  REQUIRE(r.code == 0);
  CHECK(r.json["config"]["threads"] == 2);
  // determinism does not depend on the cap
  RunOut r2 = run_cli({"claim-witness", "--field", "q", "--n", "2"});
  r.json.erase("timing_ms");
  r2.json.erase("timing_ms");
  r.json["config"].erase("threads");
  CHECK(r.json == r2.json);
}
