#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "support.hpp"
#include "tropic/cli.hpp"

using nlohmann::json;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;

  json report() const { return json::parse(out); }
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Outcome o;
  o.code = tropic::cli::run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string temp_file(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("tropic_cli_" + name)).string();
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = temp_file(name);
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("bounds commands") {
  auto r = run({"bounds", "shallow", "--inputs", "2", "--ranks", "2,2,2"});
  REQUIRE(r.code == 0);
  CHECK(r.report()["results"]["regions_max"] == 7);
  CHECK(r.report()["results"]["trivial"] == 8);

  r = run({"bounds", "shallow", "--inputs", "2", "--ranks", "2,2,2", "--no-bias"});
  CHECK(r.report()["results"]["regions_max"] == 6);

  r = run({"bounds", "deep", "--inputs", "2", "--widths", "2,2", "--rank", "3"});
  CHECK(r.report()["results"]["upper"] == 81);
  CHECK(r.report()["results"]["lower"] == 25);

  r = run({"bounds", "deep", "--inputs", "2", "--widths", "3,2", "--rank", "2"});
  REQUIRE(r.code == 0);
  CHECK(r.report()["results"]["lower"].is_null());
  CHECK(r.report()["certificates"]["lower_admissible"] == false);

  r = run({"bounds", "prior", "--inputs", "2", "--units", "3", "--rank", "3"});
  CHECK(r.report()["results"]["prior_lower"] == 9);
  CHECK(r.report()["results"]["prior_upper"] == 46);
  CHECK(r.report()["results"]["regions_max"] == 19);
}

TEST_CASE("huge values are decimal strings") {
  std::string ranks = "100";
  for (int i = 0; i < 20; ++i) ranks += ",100";
  const auto r = run({"bounds", "shallow", "--inputs", "30", "--ranks", ranks});
  REQUIRE(r.code == 0);
  const auto v = r.report()["results"]["regions_max"];
  REQUIRE(v.is_string());
  CHECK(v.get<std::string>() == "1" + std::string(42, '0'));
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"bounds", "shallow", "--inputs", "2"}).code == 2);
  CHECK(run({"bounds", "shallow", "--inputs", "x", "--ranks", "2"}).code == 2);
  CHECK(run({"regions", "count", "--network", "/nonexistent.json"}).code == 2);
  CHECK(run({"construct", "shallow-max", "--inputs", "2", "--ranks", "3,3"}).code == 2);  // seed is mandatory
  CHECK(run({"regions", "count", "--network", tropic::testing::data_path("two_unit_layer.json"), "--method", "x"})
            .code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("region counting by every method") {
  const auto r = run({"regions", "count", "--network", tropic::testing::data_path("two_unit_layer.json"),
                      "--method", "all", "--faces"});
  REQUIRE(r.code == 0);
  const auto res = r.report()["results"];
  CHECK(res["pattern"]["regions"] == 8);
  CHECK(res["poset"]["regions"] == 8);
  CHECK(res["dual"]["regions"] == 8);
  CHECK(res["consistent"] == true);
  CHECK(res["pattern"]["faces"] == json::array({5, 12, 8}));
  CHECK(res["faces_consistent"] == true);
  CHECK(r.report()["certificates"]["simple"] == true);
}

TEST_CASE("budgets and preconditions map to exit codes") {
  const auto path = tropic::testing::data_path("two_unit_layer.json");
  auto r = run({"regions", "count", "--network", path, "--max-signatures", "3"});
  CHECK(r.code == 3);
  CHECK(r.err.find("--max-signatures") != std::string::npos);

  r = run({"regions", "count", "--network", path, "--method", "poset", "--max-poset", "2"});
  CHECK(r.code == 3);
  CHECK(r.err.find("--max-poset") != std::string::npos);

  // Three lines through one point.
  const auto concurrent = write_temp("concurrent.json", R"({"input_dim": 2, "layers": [{"bias_mode": "bias",
      "units": [{"weights": [[1, 0], [0, 0]], "biases": [0, 0]},
                {"weights": [[0, 1], [0, 0]], "biases": [0, 0]},
                {"weights": [[1, 1], [0, 0]], "biases": [0, 0]}]}]})");
  r = run({"regions", "count", "--network", concurrent});
  REQUIRE(r.code == 0);
  CHECK(r.report()["certificates"]["simple"] == false);
  CHECK(r.report()["results"]["consistent"] == true);
  CHECK(r.report()["results"]["pattern"]["regions"] == 6);
  r = run({"regions", "count", "--network", concurrent, "--require-simple"});
  CHECK(r.code == 4);
  CHECK(r.err.find("not simple") != std::string::npos);
}

TEST_CASE("construct then count") {
  const auto out = temp_file("shallow.json");
  auto r = run({"construct", "shallow-max", "--inputs", "2", "--ranks", "3,3", "--seed", "1", "-o", out});
  REQUIRE(r.code == 0);
  CHECK(r.report()["seed"] == 1);
  r = run({"regions", "count", "--network", out});
  CHECK(r.report()["results"]["pattern"]["regions"] == 9);
  CHECK(r.report()["results"]["consistent"] == true);

  const auto nb = temp_file("nobias.json");
  run({"construct", "shallow-max-nobias", "--inputs", "3", "--ranks", "3,3,2", "--seed", "2", "-o", nb});
  r = run({"regions", "count", "--network", nb});
  CHECK(r.report()["results"]["poset"]["regions"] == 15);
  CHECK(r.report()["results"]["consistent"] == true);

  const auto deep = temp_file("deep.json");
  r = run({"construct", "deep-lower", "--inputs", "1", "--widths", "2,1", "--rank", "2", "--seed", "1", "-o", deep});
  REQUIRE(r.code == 0);
  CHECK(r.report()["results"]["regions_lower"] == 6);
  r = run({"regions", "count", "--network", deep, "--method", "pattern"});
  CHECK(r.report()["results"]["pattern"].get<int>() >= 6);
  CHECK(run({"regions", "count", "--network", deep, "--method", "poset"}).code == 4);
}

TEST_CASE("results are deterministic") {
  const std::vector<std::string> args{"sample", "--inputs", "2", "--ranks", "3,2,2", "--seed", "5"};
  auto a = run(args).report();
  auto b = run(args).report();
  CHECK(a["results"] == b["results"]);
  CHECK(a["seed"] == 5);

  const auto net = write_temp("sampled.json", a["results"]["network"].dump());
  auto one = run({"--jobs", "1", "regions", "cells", "--network", net}).report();
  auto many = run({"regions", "cells", "--network", net, "--jobs", "4"}).report();
  CHECK(one["results"] == many["results"]);
  for (const auto& cell : one["results"]["cells"]) {
    for (const auto& tie : cell["signature"]) {
      for (const auto& idx : tie) CHECK(idx.get<int>() >= 1);
    }
  }
}

TEST_CASE("poset dump") {
  const auto r = run({"poset", "dump", "--network", tropic::testing::data_path("two_unit_layer.json")});
  REQUIRE(r.code == 0);
  const auto res = r.report()["results"];
  CHECK(res["regions"] == 8);
  CHECK(res["elements"][0]["id"] == 1);
  CHECK(res["elements"][0]["mu"] == 1);
  CHECK(res["elements"][0]["atoms"].empty());
  CHECK(res["atoms"].size() == 6);
  CHECK(res["atoms"][0]["unit"] == 1);
}

TEST_CASE("Minkowski commands") {
  auto r = run({"minkowski", "classify", "--points", tropic::testing::data_path("segment_plus_triangle_sum.json")});
  REQUIRE(r.code == 0);
  CHECK(r.report()["results"]["vertices"] == 6);
  CHECK(r.report()["results"]["upper"] == 5);
  CHECK(r.report()["results"]["strict_lower"] == 1);

  r = run({"minkowski", "sum", "--network", tropic::testing::data_path("segment_plus_triangle.json")});
  REQUIRE(r.code == 0);
  CHECK(r.report()["results"]["count"] == 6);

  r = run({"minkowski", "lift", "--network", tropic::testing::data_path("segment_plus_triangle.json")});
  CHECK(r.report()["results"]["point_sets"].size() == 2);

  r = run({"minkowski", "sample", "--inputs", "1", "--units", "3", "--seed", "3"});
  REQUIRE(r.code == 0);
  CHECK(r.report()["results"]["point_sets"].size() == 3);
  CHECK(r.report()["certificates"]["general_orientation"] == true);
}

TEST_CASE("identity verification") {
  const auto r = run({"verify", "identities", "--trials", "2", "--seed", "7"});
  REQUIRE(r.code == 0);
  const auto res = r.report()["results"];
  CHECK(res["all_passed"] == true);
  CHECK(res["suites"].size() == 8);
  for (const auto& s : res["suites"]) CHECK(s["failed"] == 0);
}

TEST_CASE("table output") {
  const auto r = run({"--table", "bounds", "shallow", "--inputs", "2", "--ranks", "3,3"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("results.regions_max") != std::string::npos);
  CHECK(r.out.find('{') == std::string::npos);
}
