// Exercises the installed CLI surface end to end: exit codes, guards, and
// byte-level determinism of emitted files.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

int run_cli(const std::string& args) {
  const std::string command =
      std::string(SELPRED_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("run: erm lower bound experiment passes in exact mode") {
  CHECK(run_cli("run --experiment erm-lower --k 3 --exact") == 0);
}

TEST_CASE("run: unknown names are usage errors") {
  CHECK(run_cli("run --experiment no-such-experiment --k 3") == 2);
  CHECK(run_cli("run --experiment mean-upper --k 3 --source no-such-source") == 2);
  CHECK(run_cli("run --experiment mean-upper") == 2);  // missing --k/--n
  CHECK(run_cli("nonsense") == 2);
}

TEST_CASE("certify: bounds hold and guards trip") {
  CHECK(run_cli("certify --source anti-concentrated --k 3") == 0);
  CHECK(run_cli("certify --source anti-concentrated --k 4") == 2);
  CHECK(run_cli("certify --source fixed-time --n 8 --t 4") == 0);
  CHECK(run_cli("certify --source halving-block --n 8") == 0);
  CHECK(run_cli("certify --source block --n 8 --m 4") == 0);
  CHECK(run_cli("certify --source block --n 8") == 2);  // missing --m
}

TEST_CASE("figures: guard and byte determinism") {
  CHECK(run_cli("figures --k 8") == 2);

  const auto dir = std::filesystem::temp_directory_path() / "selpred_cli_test";
  std::filesystem::create_directories(dir);
  const auto a = dir / "fig_a.csv";
  const auto b = dir / "fig_b.csv";
  CHECK(run_cli("figures --k 16 --seed 7 --out " + a.string()) == 0);
  CHECK(run_cli("figures --k 16 --seed 7 --out " + b.string()) == 0);
  const std::string first = slurp(a);
  CHECK_FALSE(first.empty());
  CHECK(first == slurp(b));
  std::filesystem::remove_all(dir);
}

TEST_CASE("run: output file is reproducible for a fixed seed") {
  const auto dir = std::filesystem::temp_directory_path() / "selpred_cli_run";
  std::filesystem::create_directories(dir);
  const auto a = dir / "run_a.csv";
  const auto b = dir / "run_b.csv";
  const std::string base =
      "run --experiment mean-lower --k 4 --trials 200 --seed 11 --out ";
  CHECK(run_cli(base + a.string()) == 0);
  CHECK(run_cli(base + b.string()) == 0);
  const std::string first = slurp(a);
  CHECK_FALSE(first.empty());
  CHECK(first == slurp(b));
  std::filesystem::remove_all(dir);
}

TEST_CASE("suite: single-criterion filter runs clean") {
  const auto dir = std::filesystem::temp_directory_path() / "selpred_cli_suite";
  CHECK(run_cli("suite --criteria 2 --out " + dir.string()) == 0);
  std::filesystem::remove_all(dir);
}
