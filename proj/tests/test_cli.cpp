#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "fuchsian/cli.hpp"

using namespace fuchsian;

namespace {

struct Result {
  int code;
  std::string out, err;
  Json json() const { return Json::parse(out); }
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string sample(const std::string& name) { return std::string(FUCHSIAN_SAMPLES_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("fuchsian_cli_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST_CASE("check-angles") {
  const auto r = run({"check-angles", "--alphas", "0.5,0.5,0.5,2"});
  REQUIRE(r.code == 0);
  const auto j = r.json();
  CHECK(j["cond"] == true);
  CHECK(j["bound"] == 2);
  CHECK(j["coaxial_ok"] == true);
  const auto bad = run({"check-angles", "--alphas", "0.1,0.1,0.1,3"});
  CHECK(bad.json()["cond"] == false);
}

TEST_CASE("solve is deterministic and verify accepts its output") {
  const auto a = run({"solve", "--input", sample("equation_m2.json"), "--seed", "7"});
  const auto b = run({"solve", "--input", sample("equation_m2.json"), "--seed", "7"});
  const auto c = run({"solve", "--input", sample("equation_m2.json"), "--seed", "7", "--workers", "1"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  const auto j = a.json();
  CHECK(j["report"]["bezout_bound"] == 3);
  CHECK(j["equations"].size() == 3);

  const auto path = temp_file("sol.json", a.out);
  const auto v = run({"verify", "--input", path});
  REQUIRE(v.code == 0);
  const auto vj = v.json();
  CHECK(vj["ok"] == true);
  for (const auto& r : vj["results"]) {
    CHECK(r["residual_f1"].get<double>() < 1e-8);
    CHECK(r["residual_f2"].get<double>() < 1e-8);
    CHECK(r["monodromy_match"] == true);
    CHECK(r["Q_degree"] == 2);
  }
  const auto k = run({"klein", "--input", path, "--pretty"});
  REQUIRE(k.code == 0);
  CHECK(k.json()["results"].size() == 3);
}

TEST_CASE("monodromy and count subcommands") {
  const auto m = run({"monodromy", "--input", sample("sl_form.json"), "--normalize"});
  REQUIRE(m.code == 0);
  const auto mj = m.json();
  CHECK(mj["monodromy"]["loops"].size() == 4);
  CHECK(mj["monodromy"]["det_normalized"] == true);
  const auto& det = mj["monodromy"]["loops"][0]["det"];
  CHECK(std::abs(Complex(det[0].get<double>(), det[1].get<double>()) - 1.0) < 1e-8);

  const auto c = run({"count", "--input", sample("angles_n4.json")});
  REQUIRE(c.code == 0);
  CHECK(c.json()["verified"] == 2);
  const auto t = run({"count", "--alphas", "6,2,2,6"});
  REQUIRE(t.code == 0);
  CHECK(t.json()["tableaux"]["tableaux_count"] == 2);
}

TEST_CASE("exit codes and error objects") {
  SECTION("unknown subcommand") {
    const auto r = run({"frobnicate"});
    CHECK(r.code == 2);
    CHECK_FALSE(r.err.empty());
  }
  SECTION("malformed JSON") {
    const auto r = run({"solve", "--input", temp_file("bad.json", "{\"alpha\": [0.1,")});
    CHECK(r.code == 2);
    CHECK(r.json()["error"]["code"] == "malformed_json");
  }
  SECTION("missing field") {
    const auto r = run({"solve", "--input", temp_file("nobeta.json", "{\"alpha\": 0.1}")});
    CHECK(r.code == 2);
    CHECK(r.json()["error"]["code"] == "missing_field");
  }
  SECTION("validation failure in the library") {
    const auto r = run({"solve", "--input",
                        temp_file("dup.json", R"({"alpha":0.2,"beta":0.3,"gamma_minus_delta":0.4,"points":[1.0],"mults":[1]})")});
    CHECK(r.code == 2);
    CHECK(r.json()["error"]["kind"] == "validation");
  }
  SECTION("numerical failure") {
    // accessory chosen by hand, so the apparent point is not apparent
    const auto r = run({"klein", "--input",
                        temp_file("notapp.json",
                                  R"({"alpha":0.21,"beta":0.37,"gamma_minus_delta":0.43,"points":[[-0.7,1.3]],"mults":[2],"accessory":[[0.9,-0.4]]})")});
    CHECK(r.code == 3);
    CHECK(r.json()["error"]["kind"] == "numerical");
  }
  SECTION("bad tolerances") {
    CHECK(run({"solve", "--input", sample("equation_m2.json"), "--tol", "-1"}).code == 2);
    CHECK(run({"verify", "--input", sample("equation_m2.json"), "--series-T", "10"}).code == 2);
  }
  SECTION("coaxial input") {
    const auto r = run({"count", "--alphas", "0.5,0.25,0.25,2"});
    CHECK(r.code == 2);
    CHECK(r.json()["error"]["code"] == "coaxial_unsupported");
  }
}
