#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "spectring/experiment.hpp"
#include "spectring/serialize.hpp"
#include "support/generators.hpp"

using namespace spectring;
using nlohmann::json;

namespace {

int run_body(const std::string& sub, const json& body, std::string& out,
             std::string& err) {
  std::ostringstream os, es;
  const int rc = run(ExperimentConfig{sub, body}, os, es);
  out = os.str();
  err = es.str();
  return rc;
}

bool has_error(const std::vector<Diagnostic>& ds, const std::string& field) {
  for (const Diagnostic& d : ds)
    if (d.field == field && d.severity == Diagnostic::Severity::error)
      return true;
  return false;
}

} // namespace

TEST_CASE("validate: good config is empty apart from the seed warning") {
  const json body = {{"model", "ssrw"}, {"n", 8}, {"seed", 3}};
  const auto ds = validate(ExperimentConfig{"eig", body});
  CHECK(ds.empty());

  const json no_seed = {{"model", "ssrw"}, {"n", 8}};
  const auto ds2 = validate(ExperimentConfig{"eig", no_seed});
  REQUIRE(ds2.size() == 1);
  CHECK(ds2[0].severity == Diagnostic::Severity::warning);
  CHECK(ds2[0].field == "seed");
}

TEST_CASE("validate: rejects out-of-range and unknown fields") {
  const json bad_alpha = {{"model", "trap"}, {"alpha", 1.5}, {"seed", 1}};
  CHECK(has_error(validate(ExperimentConfig{"eig", bad_alpha}), "alpha"));

  const json small_n = {{"model", "ssrw"}, {"n", 1}, {"seed", 1}};
  CHECK(has_error(validate(ExperimentConfig{"eig", small_n}), "n"));

  const json unknown = {{"model", "ssrw"}, {"n", 8}, {"seed", 1},
                        {"bogus", 1}};
  CHECK(has_error(validate(ExperimentConfig{"eig", unknown}), "bogus"));

  CHECK(!validate(ExperimentConfig{"frobnicate", json::object()}).empty());
}

TEST_CASE("run: eig on the constant-rate walk") {
  std::string out, err;
  const int rc = run_body(
      "eig", {{"model", "ssrw"}, {"n", 4}, {"seed", 1}}, out, err);
  CHECK(rc == 0);
  CHECK(out.find("k,lambda,residual") != std::string::npos);
  CHECK(out.find("0.29289321881345") != std::string::npos);
  CHECK(out.find("1.7071067811865") != std::string::npos);
  CHECK(out.find("# config-hash: ") != std::string::npos);
  CHECK(out.find("# seed: 1") != std::string::npos);
}

TEST_CASE("run: invalid alpha exits 2 with a machine-readable error") {
  std::string out, err;
  const int rc = run_body(
      "eig", {{"model", "trap"}, {"alpha", 1.5}, {"seed", 1}}, out, err);
  CHECK(rc == 2);
  const json e = json::parse(err);
  CHECK(e.at("error") == "validation");
  bool alpha_named = false;
  for (const auto& d : e.at("diagnostics"))
    alpha_named = alpha_named || d.at("field") == "alpha";
  CHECK(alpha_named);
}

TEST_CASE("run: converge approaches the continuum limit") {
  std::string out, err;
  const int rc = run_body("converge",
                          {{"model", "ssrw"},
                           {"k", 1},
                           {"n_list", {4, 8, 16}},
                           {"seed", 1}},
                          out, err);
  CHECK(rc == 0);
  // last row: n = 16, n^2 lambda_1 = 256 (1 - cos(pi/16)) = 4.9189...
  CHECK(out.find("n,k,lambda,n2_lambda,limit") != std::string::npos);
  CHECK(out.find("4.9189") != std::string::npos);
  CHECK(out.find("4.9348") != std::string::npos);
}

TEST_CASE("run: psi table and count report") {
  const json string_spec = {{"left", 0.0},
                            {"right", 1.0},
                            {"atoms", {{0.5, 1.0}}}};
  std::string out, err;
  int rc = run_body("psi",
                    {{"model", "explicit-string"},
                     {"string", string_spec},
                     {"lambda_grid", {0.0, 2.0, 4.0}},
                     {"seed", 1}},
                    out, err);
  CHECK(rc == 0);
  CHECK(out.find("lambda,psi_ell") != std::string::npos);
  CHECK(out.find("4,0") != std::string::npos); // psi(1, 4) = 0

  rc = run_body("count",
                {{"model", "explicit-string"},
                 {"string", string_spec},
                 {"x_grid", {1.0, 5.0}},
                 {"seed", 1},
                 {"format", "json"}},
                out, err);
  CHECK(rc == 0);
  const json report = json::parse(out);
  CHECK(report.at("data").at("rows").size() == 2);
  CHECK(report.at("data").at("violations").empty());
  CHECK(report.at("meta").at("version") == version_string);
}

TEST_CASE("run: outputs reproduce byte for byte") {
  const char* path = "spectring_test_out.csv";
  const json body = {{"model", "trap"}, {"alpha", 0.5}, {"epsilon", 1e-4},
                     {"n", 16},         {"seed", 11},   {"out", path}};
  std::string out, err;
  REQUIRE(run_body("eig", body, out, err) == 0);
  std::ifstream first(path, std::ios::binary);
  std::stringstream a;
  a << first.rdbuf();
  first.close();
  REQUIRE(run_body("eig", body, out, err) == 0);
  std::ifstream second(path, std::ios::binary);
  std::stringstream b;
  b << second.rdbuf();
  second.close();
  CHECK(a.str() == b.str());
  CHECK(!a.str().empty());
  std::remove(path);
  std::remove((std::string(path) + ".run.json").c_str());
}

TEST_CASE("run: numeric failures exit 3") {
  // drifting rates overflow the U recursion inside decompose
  json rates = {{"n", 6}, {"step", 1.0}};
  rates["left"] = std::vector<double>(6, 1e103);
  rates["right"] = std::vector<double>(6, 1e-103);
  std::string out, err;
  const int rc = run_body("eig",
                          {{"model", "explicit-rates"},
                           {"rates", rates},
                           {"seed", 1}},
                          out, err);
  CHECK(rc == 3);
  const json e = json::parse(err);
  CHECK(e.at("error") == "numeric");
}

TEST_CASE("string CSV export") {
  const KreinString s(0.0, 1.0, {Atom{0.25, 2.0}, Atom{0.75, 0.5}});
  std::ostringstream os;
  write_csv(os, s);
  CHECK(os.str() == "pos,weight\n0.25,2\n0.75,0.5\n");
}

TEST_CASE("run: eig with Neumann conditions through the front end") {
  const json string_spec = {
      {"left", 0.0},
      {"right", 1.0},
      {"atoms", {{1.0 / 3.0, 1.0}, {2.0 / 3.0, 1.0}}}};
  std::string out, err;
  const int rc = run_body("eig",
                          {{"model", "explicit-string"},
                           {"string", string_spec},
                           {"bc", "neumann"},
                           {"seed", 1}},
                          out, err);
  CHECK(rc == 0);
  CHECK(out.find("1,0,") != std::string::npos); // zero mode first
  CHECK(out.find("5.9999999999999") != std::string::npos);
}

TEST_CASE("wire formats round-trip through JSON") {
  Rng rng(4711);
  for (int rep = 0; rep < 10; ++rep) {
    const RateField r = spectring::testing::random_rate_field(
        rng, 2, 20, 1e-2, 1e2);
    const RateField back = rate_field_from_json(to_json(r));
    CHECK(back.n == r.n);
    CHECK(back.left == r.left);
    CHECK(back.right == r.right);

    const KreinString s = spectring::testing::bracketing_string(rng);
    const KreinString sback = string_from_json(to_json(s));
    CHECK(sback.left() == s.left());
    CHECK(sback.right() == s.right());
    REQUIRE(sback.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
      CHECK(sback.atoms()[i] == s.atoms()[i]);
  }
}

TEST_CASE("config hash depends on the body") {
  const ExperimentConfig a{"eig", {{"model", "ssrw"}, {"n", 4}, {"seed", 1}}};
  const ExperimentConfig b{"eig", {{"model", "ssrw"}, {"n", 8}, {"seed", 1}}};
  CHECK(config_hash(a) != config_hash(b));
  CHECK(config_hash(a) == config_hash(a));
}

TEST_CASE("run: anneal smoke test with summary") {
  std::string out, err;
  const json body = {{"model", "trap"},
                     {"alpha", 0.5},
                     {"x_grid", {{"min", 10.0}, {"max", 1000.0},
                                 {"points", 4}, {"scale", "log"}}},
                     {"samples", 40},
                     {"epsilon", 1e-3},
                     {"seed", 2}};
  const int rc = run_body("anneal", body, out, err);
  CHECK(rc == 0);
  CHECK(out.find("x,mean,stderr") != std::string::npos);
  CHECK(out.find("# summary: ") != std::string::npos);
  CHECK(out.find("expected_slope") != std::string::npos);
}
