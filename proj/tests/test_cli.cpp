// Black-box tests of the installed CLI: spawns the binary, checks exit codes,
// JSON fields and the determinism contract.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#ifndef HALFLAP_CLI_PATH
#error "HALFLAP_CLI_PATH must be defined by the build"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(HALFLAP_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    res.out.append(buf.data(), got);
  }
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::filesystem::path temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("halflap_cli_" + tag);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("help exits cleanly") {
  CHECK(run("--help").exit_code == 0);
  CHECK(run("eigen --help").exit_code == 0);
}

TEST_CASE("unknown subcommand or flag exits with configuration error") {
  CHECK(run("frobnicate").exit_code == 2);
  CHECK(run("eigen --definitely-not-a-flag 3").exit_code == 2);
}

TEST_CASE("eigen emits the documented JSON and is deterministic") {
  const auto dir = temp_dir("eigen");
  const std::string args = "eigen --domain -1,1 --n 96 --out " + dir.string();
  RunResult first = run(args);
  REQUIRE(first.exit_code == 0);
  auto js = nlohmann::json::parse(first.out);
  CHECK(js["schema"] == 1);
  CHECK(js.contains("lambda1_spec"));
  CHECK(js.contains("lambda1_X"));
  CHECK(js["n"] == 96);
  CHECK(js["lambda1_spec"].get<double>() ==
        doctest::Approx(js["lambda1_X"].get<double>() / (2.0 * 3.14159265358979)).epsilon(1e-9));
  CHECK(std::filesystem::exists(dir / "eigenfunction.csv"));

  RunResult second = run(args);
  CHECK(second.exit_code == 0);
  CHECK(second.out == first.out);  // bit-identical reports for identical config
}

TEST_CASE("assemble writes the k,a_k dump") {
  const auto dir = temp_dir("assemble");
  RunResult res = run("assemble --n 32 --out " + dir.string());
  REQUIRE(res.exit_code == 0);
  std::ifstream csv(dir / "stiffness_first_row.csv");
  REQUIRE(csv.good());
  std::string header;
  std::getline(csv, header);
  CHECK(header == "k,a_k");
}

TEST_CASE("solve-linear reports iterations and residual") {
  const auto dir = temp_dir("linear");
  RunResult res = run("solve-linear --domain -1,1 --n 64 --out " + dir.string());
  REQUIRE(res.exit_code == 0);
  auto js = nlohmann::json::parse(res.out);
  CHECK(js["n"] == 64);
  CHECK(js["iterations"].get<int>() > 0);
  CHECK(js["final_residual"].get<double>() <= 1e-12);
  CHECK(std::filesystem::exists(dir / "solution_linear.csv"));
}

TEST_CASE("mp-solve with mu auto returns a nontrivial certified solution") {
  const auto dir = temp_dir("mp");
  RunResult res = run("mp-solve --nonlinearity ex1 --mu auto --q 1.5 --n 48 --out " +
                      dir.string());
  REQUIRE(res.exit_code == 0);
  auto js = nlohmann::json::parse(res.out);
  CHECK(js["nontrivial"] == true);
  CHECK(js["residual"].get<double>() <= 1e-8);
  CHECK(js["level_c"].get<double>() > 0.0);
  CHECK(js["hypothesis_warnings"].empty());
  CHECK(std::filesystem::exists(dir / "solution_mp.csv"));
}

TEST_CASE("multi-solve finds two solutions with distinct levels") {
  const auto dir = temp_dir("multi");
  RunResult res = run("multi-solve --k 2 --nonlinearity ex1 --mu auto --n 48 --out " +
                      dir.string());
  REQUIRE(res.exit_code == 0);
  auto js = nlohmann::json::parse(res.out);
  REQUIRE(js["found"] == 2);
  const double l0 = js["levels"][0].get<double>();
  const double l1 = js["levels"][1].get<double>();
  CHECK(l1 - l0 > 1e-6);
  CHECK(js["residuals"][0].get<double>() <= 1e-8);
  CHECK(js["residuals"][1].get<double>() <= 1e-8);
  CHECK(std::filesystem::exists(dir / "solution_0.csv"));
  CHECK(std::filesystem::exists(dir / "solution_1.csv"));
}

TEST_CASE("invalid q names the violated bound and exits 2") {
  const std::string cmd =
      std::string(HALFLAP_CLI_PATH) + " mp-solve --nonlinearity ex1 --mu 1.0 --q 3 --n 32 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string all;
  std::array<char, 1024> buf{};
  size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) all.append(buf.data(), got);
  const int status = pclose(pipe);
  CHECK(WEXITSTATUS(status) == 2);
  CHECK(all.find("1 < q < 2") != std::string::npos);
}

TEST_CASE("tm-probe emits the alpha,sup_estimate,saturated CSV") {
  const auto dir = temp_dir("tm");
  RunResult res =
      run("tm-probe --alpha-list 0.25,0.5 --n 48 --restarts 3 --seed 7 --out " + dir.string());
  REQUIRE(res.exit_code == 0);
  CHECK(res.out.rfind("alpha,sup_estimate,saturated\n", 0) == 0);
  std::ifstream csv(dir / "tm_probe.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "alpha,sup_estimate,saturated");
  double a = 0.0, s = 0.0;
  int sat = -1;
  char c = 0;
  csv >> a >> c >> s >> c >> sat;
  CHECK(a == doctest::Approx(0.25));
  CHECK(s >= 1.0);
  CHECK(sat == 0);
}

TEST_CASE("polarize-test defaults to a symmetric interval and passes") {
  RunResult res = run("polarize-test --trials 50 --n 31 --seed 3");
  REQUIRE(res.exit_code == 0);
  auto js = nlohmann::json::parse(res.out);
  CHECK(js["violations"] == 0);
  CHECK(js["pass"] == true);
}

TEST_CASE("check-hv reports the threshold and a verdict") {
  RunResult res = run("check-hv --nonlinearity ex2 --mu auto --alpha0 1.0 --n 48");
  REQUIRE(res.exit_code == 0);
  auto js = nlohmann::json::parse(res.out);
  CHECK(js["threshold"].get<double>() == doctest::Approx(3.14159265358979 / 2.0));
  const std::string verdict = js["verdict"].get<std::string>();
  CHECK((verdict == "holds" || verdict == "fails" || verdict == "unbounded"));
}

TEST_CASE("verify-hypotheses emits the full report") {
  RunResult res = run("verify-hypotheses --nonlinearity ex1 --mu auto --q 1.5 --n 48");
  REQUIRE(res.exit_code == 0);
  auto js = nlohmann::json::parse(res.out);
  CHECK(js["schema"] == 1);
  CHECK(js["all_pass"] == true);
  CHECK(js.contains("H3_threshold"));
}

TEST_CASE("HALFLAP_OUTPUT_DIR supplies the default output directory") {
  const auto dir = temp_dir("envout");
  const std::string cmd = "HALFLAP_OUTPUT_DIR=" + dir.string() + " " +
                          std::string(HALFLAP_CLI_PATH) + " assemble --n 16 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 1024> buf{};
  while (fread(buf.data(), 1, buf.size(), pipe) > 0) {
  }
  CHECK(WEXITSTATUS(pclose(pipe)) == 0);
  CHECK(std::filesystem::exists(dir / "stiffness_first_row.csv"));
}

TEST_CASE("config file supplies defaults and flags override it") {
  const auto dir = temp_dir("cfg");
  const auto cfg = dir / "run.cfg";
  {
    std::ofstream out(cfg);
    out << "n=32\n";
    out << "domain=-1,1\n";
  }
  RunResult from_file = run("eigen --config " + cfg.string() + " --out " + dir.string());
  REQUIRE(from_file.exit_code == 0);
  CHECK(nlohmann::json::parse(from_file.out)["n"] == 32);

  RunResult overridden =
      run("eigen --config " + cfg.string() + " --n 24 --out " + dir.string());
  REQUIRE(overridden.exit_code == 0);
  CHECK(nlohmann::json::parse(overridden.out)["n"] == 24);
}
