#include "katolab/cli.hpp"
#include "katolab/report.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace katolab;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "katolab_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

Json readJson(const std::filesystem::path& p) {
  std::ifstream in(p);
  return Json::parse(in);
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("constants writes every closed-form value") {
  const auto out = scratch("constants.json");
  REQUIRE(run_cli({"constants", "--n", "2", "--alpha", "0.5", "--beta", "2", "--diam", "0.7071", "--out",
                   out.string()}) == kExitPassed);
  const Json doc = readJson(out);
  CHECK(doc.at("header").at("tool") == "katolab");
  const Json& body = doc.at("body");
  CHECK(body.at("params").at("delta").get<double>() == doctest::Approx(2.0 / 9.0).epsilon(1e-12));
  CHECK(body.at("params").at("threshold").get<double>() == doctest::Approx(2.0 / 43.0).epsilon(1e-12));
  CHECK(body.at("heat_kernel_constant_C1").get<double>() ==
        doctest::Approx(std::pow(2.0, 2.25) * std::exp(0.7071 * 0.7071)).epsilon(1e-12));
  CHECK(body.at("t").get<double>() == 0.5);
}

TEST_CASE("bad input exits with status 2") {
  CHECK(run_cli({"constants", "--alpha", "1.5", "--beta", "1"}) == kExitInputError);
  CHECK(run_cli({"constants", "--alpha", "0.5"}) == kExitInputError);
  CHECK(run_cli({"constants", "--beta", "1", "--b", "0.5"}) == kExitInputError);
  CHECK(run_cli({"verify", "--manifold", "klein:1"}) == kExitInputError);
  CHECK(run_cli({"mesh", "--mesh-file", KATOLAB_TEST_DATA "/icosahedron_hole.off"}) == kExitInputError);
  CHECK(run_cli({"frobnicate"}) == kExitInputError);
}

TEST_CASE("config file fills flags and the command line wins") {
  const auto cfg = scratch("config.json");
  {
    std::ofstream f(cfg);
    f << R"({"command": "constants", "n": 3, "alpha": 0.5, "beta": 1.0})";
  }
  const auto out = scratch("config_out.json");
  REQUIRE(run_cli({"--config", cfg.string(), "--beta", "4", "--out", out.string()}) == kExitPassed);
  const Json body = readJson(out).at("body");
  CHECK(body.at("params").at("n") == 3);
  CHECK(body.at("params").at("beta").get<double>() == 4.0);
}

TEST_CASE("verify bodies are byte-identical across runs") {
  const auto a = scratch("verify_a.json");
  const auto b = scratch("verify_b.json");
  const auto csv = scratch("verify.csv");
  for (const auto& p : {a, b}) {
    REQUIRE(run_cli({"verify", "--manifold", "flat-torus:1x1", "--seed", "3", "--out", p.string(), "--csv",
                     csv.string()}) == kExitPassed);
  }
  CHECK(readJson(a).at("body").dump() == readJson(b).at("body").dump());
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "check,point,other_point,t,other_t,observed,bound,margin");
}

TEST_CASE("mesh summary of a builder mesh") {
  const auto out = scratch("mesh.json");
  const auto off = scratch("mesh.off");
  REQUIRE(run_cli({"mesh", "--manifold", "sphere:r=1,subdiv=2", "--out", out.string(), "--write-off", off.string()}) ==
          kExitPassed);
  const Json body = readJson(out).at("body");
  CHECK(body.dump().find("162") != std::string::npos);
  CHECK(std::filesystem::file_size(off) > 0);
  CHECK(run_cli({"mesh", "--mesh-file", off.string(), "--out", out.string()}) == kExitPassed);
}

} // TEST_SUITE
