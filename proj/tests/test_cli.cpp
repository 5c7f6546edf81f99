#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

using nlohmann::json;

std::string cli() {
  const char* p = std::getenv("CHANDEF_CLI");
  REQUIRE_MESSAGE(p != nullptr, "CHANDEF_CLI must point at the executable");
  return p;
}

std::string fixtures() {
  const char* p = std::getenv("CHANDEF_FIXTURES");
  REQUIRE_MESSAGE(p != nullptr, "CHANDEF_FIXTURES must point at the fixture dir");
  return p;
}

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string out_file = "/tmp/chandef_cli_test.out";
  std::string cmd = cli() + " " + args + " > " + out_file + " 2>/dev/null";
  int rc = std::system(cmd.c_str());
  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, ss.str()};
}

}  // namespace

TEST_CASE("deficiency subcommand emits valid JSON with the known value") {
  auto r = run("deficiency --joint " + fixtures() + "/erasure_chain.json --details");
  REQUIRE(r.exit_code == 0);
  json doc = json::parse(r.out);
  CHECK(doc["deficiency_bits"].get<double>() == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(doc["converged"].get<bool>());
  CHECK(doc["encoder"].size() == 3);
  CHECK(doc["per_input"].size() == 3);
}

TEST_CASE("blackwell subcommand reports the witness") {
  auto r = run("blackwell --joint " + fixtures() + "/erasure_chain.json");
  REQUIRE(r.exit_code == 0);
  json doc = json::parse(r.out);
  CHECK(doc["sufficient"].get<bool>());
  CHECK(doc["witness_encoder"].size() == 3);
}

TEST_CASE("pid subcommand kinds") {
  for (std::string kind : {"classical", "deficiency", "both"}) {
    auto r = run("pid --joint " + fixtures() + "/copy.json --kind " + kind);
    REQUIRE(r.exit_code == 0);
    json doc = json::parse(r.out);
    if (kind == "both") {
      CHECK(doc["classical"]["shared_bits"].get<double>() == doctest::Approx(1.0));
      CHECK(doc["near_equality"].get<bool>());
    } else {
      CHECK(doc["shared_bits"].get<double>() == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("explicit prior/channel/decoder inputs work") {
  std::string f = fixtures();
  // A joint3-derived run must agree with the equivalent explicit run; here we
  // just exercise the explicit path on a self-comparison (zero deficiency).
  std::ofstream("/tmp/chandef_k.json")
      << R"({"kind":"channel","dims":[2,2],"values":[0.9,0.1,0.2,0.8]})";
  auto r = run("deficiency --prior " + f + "/uniform2.json --channel /tmp/chandef_k.json "
               "--decoder /tmp/chandef_k.json");
  REQUIRE(r.exit_code == 0);
  json doc = json::parse(r.out);
  CHECK(doc["deficiency_bits"].get<double>() == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("curve subcommands produce the documented CSV header") {
  std::string f = fixtures();
  auto ib = run("ib-curve --joint " + f + "/bsc.json --beta-grid 0.05,0.2 --csv");
  REQUIRE(ib.exit_code == 0);
  CHECK(ib.out.rfind("beta,rate_bits,sufficiency_bits,objective_bits\n", 0) == 0);
  CHECK(std::count(ib.out.begin(), ib.out.end(), '\n') == 3);

  auto db = run("db-curve --joint " + f + "/erasure_chain.json --beta-grid 0.05,0.2 "
                "--schedule seq:2 --csv");
  REQUIRE(db.exit_code == 0);
  CHECK(db.out.rfind("beta,rate_bits,sufficiency_bits,objective_bits\n", 0) == 0);
}

TEST_CASE("curve JSON mode carries the maps when asked") {
  auto r = run("db-curve --joint " + fixtures() + "/erasure_chain.json --beta-grid 0.1 "
               "--maps");
  REQUIRE(r.exit_code == 0);
  json doc = json::parse(r.out);
  REQUIRE(doc.is_array());
  CHECK(doc[0].contains("encoder"));
  CHECK(doc[0].contains("decoder"));
  CHECK(doc[0]["converged"].get<bool>());
}

TEST_CASE("estimate subcommand is reproducible and ordered") {
  std::string f = fixtures();
  std::string args = "estimate --data " + f + "/toy_pairs.json --encoder " + f +
                     "/toy_encoder.json --decoder " + f +
                     "/toy_decoder.json --m-grid 1,4 --batch 500 --seed 11";
  auto a = run(args);
  auto b = run(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  json doc = json::parse(a.out);
  REQUIRE(doc.size() == 2);
  CHECK(doc[0]["jensen_gap"].get<double>() == 0.0);
  CHECK(doc[1]["jensen_gap"].get<double>() >= 0.0);
}

TEST_CASE("output file option writes the same bytes as stdout") {
  std::string f = fixtures();
  auto direct = run("riskgap --joint " + f + "/erasure_chain.json");
  auto to_file = run("riskgap --joint " + f + "/erasure_chain.json -o /tmp/chandef_rg.json");
  REQUIRE(direct.exit_code == 0);
  REQUIRE(to_file.exit_code == 0);
  std::ifstream in("/tmp/chandef_rg.json");
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == direct.out);
}

TEST_CASE("invalid inputs exit with code 2 and a field diagnostic") {
  auto bad = run("pid --joint " + fixtures() + "/bad_norm.json");
  CHECK(bad.exit_code == 2);
  auto missing = run("pid --joint /nonexistent.json");
  CHECK(missing.exit_code == 2);
  std::ofstream("/tmp/chandef_badfield.json")
      << R"({"kind":"channel","dims":[2,2],"values":[0.9,0.1,0.2]})";
  auto field = run("deficiency --prior " + fixtures() + "/uniform2.json "
                   "--channel /tmp/chandef_badfield.json --decoder /tmp/chandef_badfield.json");
  CHECK(field.exit_code == 2);
}

TEST_CASE("disjoint supports surface as a degenerate exit code") {
  // kappa puts mass where no decoder row does, so the divergence is infinite.
  std::ofstream("/tmp/chandef_kpos.json")
      << R"({"kind":"channel","dims":[2,2],"values":[1.0,0.0,0.0,1.0]})";
  std::ofstream("/tmp/chandef_dneg.json")
      << R"({"kind":"channel","dims":[2,2],"values":[0.0,1.0,0.0,1.0]})";
  auto r = run("deficiency --prior " + fixtures() + "/uniform2.json "
               "--channel /tmp/chandef_kpos.json --decoder /tmp/chandef_dneg.json");
  CHECK(r.exit_code == 3);
  json doc = json::parse(r.out);
  CHECK(doc["deficiency_bits"].get<std::string>() == "inf");
}

TEST_CASE("frozen fixture outputs stay stable") {
  std::string f = fixtures();
  auto r = run("pid --joint " + f + "/xor.json --kind both");
  REQUIRE(r.exit_code == 0);
  std::ifstream in(f + "/expected/pid_xor.json");
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(r.out == ss.str());
}
