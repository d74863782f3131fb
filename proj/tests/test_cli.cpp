#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "bofc/cli.hpp"

using nlohmann::json;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = bofc::cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_file(const std::string& name, const std::string& content) {
  const auto dir = std::filesystem::temp_directory_path() / "bofc_test_cli";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream f(path);
  f << content;
  return path.string();
}

}  // namespace

TEST_CASE("classify prints the classification as JSON") {
  const std::string path = write_file(
      "lff8.json",
      R"({"n":8,"edges":[[2,1],[3,1],[3,2],[4,1],[4,2],[5,2],[5,3],[6,2],[6,4],[7,5],[7,6],[8,6],[8,7]]})");
  const CliResult r = run_cli({"classify", path});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("class") == "LFF");
  CHECK(j.at("leader") == 1);
  CHECK(j.at("first_follower") == 2);
  CHECK(j.at("also_ordered_lff") == true);
  CHECK(j.at("violations").empty());
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({"classify"}).code == 2);
  CHECK(run_cli({"classify", "/nonexistent.json"}).code == 2);
  CHECK(run_cli({"paper", "not-a-scenario"}).code == 2);
  CHECK(run_cli({"simulate", "/nonexistent.json"}).code == 2);
}

TEST_CASE("help exits cleanly") {
  const CliResult r = run_cli({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("simulate") != std::string::npos);
}

TEST_CASE("equilibrium subcommand reports the closed form") {
  const CliResult r = run_cli({"equilibrium", "one-to-many-5"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("positions").at("d") == 2);
  const auto follower = j.at("positions").at("positions").at(5);
  CHECK(follower[0].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(follower[1].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(j.at("stability").back() == "stable");
  CHECK(j.at("lambda_min").get<double>() > 0.0);
}

TEST_CASE("nullspace subcommand reports dimensions and residuals") {
  const CliResult r = run_cli({"nullspace", "one-to-many-5"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("kernel_dimension") == 8);
  CHECK(j.at("free_coefficients") == 3);
  CHECK(j.at("residual_bearing").get<double>() < 1e-10);
  CHECK(j.at("residual_mixing").get<double>() < 1e-10);

  SUBCASE("matrix dump") {
    const auto dir = std::filesystem::temp_directory_path() / "bofc_test_cli" / "basis";
    const CliResult rd = run_cli({"nullspace", "one-to-many-5", "--dump", dir.string()});
    CHECK(rd.code == 0);
    CHECK(std::filesystem::exists(dir / "projection_stack.csv"));
    CHECK(std::filesystem::exists(dir / "mixing.csv"));
  }
}

TEST_CASE("simulate writes a trajectory and verdict") {
  const auto dir = std::filesystem::temp_directory_path() / "bofc_test_cli" / "sim";
  std::filesystem::remove_all(dir);
  const CliResult r = run_cli({"simulate", "one-to-many-5", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(std::filesystem::exists(dir / "trajectory.csv"));
  CHECK(std::filesystem::exists(dir / "verdict.json"));
  std::ifstream v(dir / "verdict.json");
  json j;
  v >> j;
  CHECK(j.at("verdict") == "Converged");
}

TEST_CASE("simulate propagates a failed expectation as exit 1") {
  // the pentagon scenario expects convergence; an absurdly tight tolerance
  // prevents it
  const auto dir = std::filesystem::temp_directory_path() / "bofc_test_cli" / "sim_fail";
  const CliResult r =
      run_cli({"simulate", "one-to-many-5", "--out", dir.string(), "--tol", "1e-14",
               "--t-max", "1"});
  CHECK(r.code == 1);
}

TEST_CASE("paper subcommand reports pass lines") {
  const CliResult r = run_cli({"paper", "one-to-many-5"});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS one-to-many-5") == 0);

  const CliResult list = run_cli({"paper", "--list"});
  CHECK(list.code == 0);
  CHECK(list.out.find("hexagon-good") != std::string::npos);
  CHECK(list.out.find("unordered-8") != std::string::npos);
}

TEST_CASE("simulate runs seed batches into per-seed directories") {
  const auto dir = std::filesystem::temp_directory_path() / "bofc_test_cli" / "batch";
  std::filesystem::remove_all(dir);
  const CliResult r = run_cli({"simulate", "lff-8", "--out", dir.string(), "--seeds", "2",
                               "--t-max", "400"});
  CHECK(r.code == 0);
  CHECK(std::filesystem::exists(dir / "seed0" / "trajectory.csv"));
  CHECK(std::filesystem::exists(dir / "seed1" / "verdict.json"));
  const json j = json::parse(r.out);
  CHECK(j.at("runs").size() == 2);
}

TEST_CASE("compare subcommand reports matched errors and the ordering flag") {
  const CliResult r = run_cli({"compare", "lff-8", "olff-8"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("verdict_a") == "Converged");
  CHECK(j.at("verdict_b") == "Converged");
  CHECK(j.at("b_no_slower") == true);
  CHECK(j.at("time_to_tol_b").get<double>() <= j.at("time_to_tol_a").get<double>());
  CHECK(j.at("matched_errors").size() > 10);
}
