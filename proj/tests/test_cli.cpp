// Copyright 2026 The qmeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = QMEAS_CLI_PATH;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("qmeas_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

int run(const std::string& args) {
  const int status = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.push_back("");
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("instantaneous subcommand") {
  TempDir tmp;
  const fs::path out = tmp.path / "inst.csv";
  CHECK(run("instantaneous --n-max 3 --out " + out.string()) == 0);

  const auto rows = read_csv(out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"N", "Y_opt", "Y_asymptotic",
                                            "Y_bruteforce", "abs_gap"});
  CHECK(std::stod(rows[1][1]) == doctest::Approx(0.5));
  CHECK(std::stod(rows[2][1]) == doctest::Approx(0.5625));
  CHECK(std::stod(rows[3][1]) == doctest::Approx(0.625));
  // Brute-force column is filled for N <= 6.
  CHECK(std::stod(rows[1][3]) == doctest::Approx(0.5).epsilon(1e-6));

  // N above 6: the brute-force cell is empty, the file still has 5 columns.
  const fs::path out8 = tmp.path / "inst8.csv";
  CHECK(run("instantaneous --n-max 8 --out " + out8.string()) == 0);
  const auto rows8 = read_csv(out8);
  REQUIRE(rows8.size() == 9);
  CHECK(rows8[8].size() == 5);
  CHECK(rows8[8][3].empty());

  // Usage errors.
  CHECK(run("instantaneous --n-max 0 --out " + out.string()) == 1);
  CHECK(run("bogus-subcommand") == 1);
  CHECK(run("") == 1);
}

TEST_CASE("continuous subcommand") {
  TempDir tmp;
  const fs::path out = tmp.path / "cont.csv";
  CHECK(run("continuous --gamma-prime 0.5,2 --steps 20000 --out " +
            out.string()) == 0);
  const auto rows = read_csv(out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0][0] == "gamma_prime");
  CHECK(rows[0][5] == "|Y_opt-Y_rk4|");
  // A_m = 0 below gamma' = 1.
  CHECK(std::stod(rows[1][1]) == 0.0);
  CHECK(std::stod(rows[1][2]) == doctest::Approx(std::acos(-1.0) / 2));
  // Oracle agreement within tolerance on every row.
  CHECK(std::stod(rows[1][5]) < 1e-6);
  CHECK(std::stod(rows[2][5]) < 1e-6);

  // Missing required flag is a usage error.
  CHECK(run("continuous --out " + out.string()) == 1);
  // Negative gamma' is a usage error.
  CHECK(run("continuous --gamma-prime -1 --out " + out.string()) == 1);
}

TEST_CASE("es-search subcommand") {
  TempDir tmp;
  const fs::path out = tmp.path / "es.csv";
  // Coarse run: knots=2 may underfit (flagged on stderr, not a failure).
  const std::string args =
      "es-search --gamma-prime 1 --knots 2 --budget 1500 --seed 5 --out ";
  CHECK(run(args + out.string()) == 0);
  const auto rows = read_csv(out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"gamma_prime", "Y_analytic", "Y_es",
                                            "gap", "evaluations_used"});
  const double gap = std::stod(rows[1][3]);
  CHECK(gap >= -1e-6);
  CHECK(std::stol(rows[1][4]) <= 1500);

  // Same seed, same bytes.
  const fs::path out2 = tmp.path / "es2.csv";
  CHECK(run(args + out2.string()) == 0);
  CHECK(slurp(out) == slurp(out2));

  // Budget below the documented minimum is a usage error.
  CHECK(run("es-search --gamma-prime 1 --budget 10 --out " + out.string()) == 1);
}

TEST_CASE("three-level subcommand") {
  TempDir tmp;
  const fs::path out = tmp.path / "three.json";
  CHECK(run("three-level --out " + out.string()) == 0);

  json report = json::parse(slurp(out));
  CHECK(report["all_ok"].get<bool>());
  CHECK(report["closed_form_p_max"].get<double>() == doctest::Approx(0.68697).epsilon(1e-4));
  CHECK(std::abs(report["grid_p_max"].get<double>() -
                 report["closed_form_p_max"].get<double>()) < 1e-9);
  CHECK(report["coherent_only_max"].get<double>() <= 0.5 + 1e-9);
  CHECK(report["prior_numeric_benchmark"].get<double>() == 0.669);
  CHECK(report["checks"]["p2_measurement_matches"].get<bool>());
  CHECK(report["tolerances"].contains("grid_match"));
  // Debug serialization of the final state: row-major [re, im] pairs.
  CHECK(report["final_state_at_optimum"]["dim"] == 3);
  CHECK(report["final_state_at_optimum"]["entries"].size() == 9);

  // Optional population sweep CSV.
  const fs::path sweep = tmp.path / "sweep.csv";
  CHECK(run("three-level --out " + out.string() + " --sweep-out " +
            sweep.string() + " --sweep-grid 16") == 0);
  const auto rows = read_csv(sweep);
  REQUIRE(rows.size() == 2 * 17 * 17 + 1);
  CHECK(rows[0] == std::vector<std::string>{"x1", "x2", "delta_psi",
                                            "measured_level", "population"});
  for (std::size_t i = 1; i < rows.size(); i += 37) {
    const double pop = std::stod(rows[i][4]);
    CHECK(pop >= 0.0);
    CHECK(pop <= 0.6875);
  }
}

TEST_CASE("config file and output directory precedence") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "cfg.json";
  {
    std::ofstream f(cfg);
    f << R"({"out_dir": ")" << tmp.path.string()
      << R"(", "instantaneous": {"n_max": 2}})";
  }
  // Config supplies n_max and the output directory.
  CHECK(run("--config " + cfg.string() + " instantaneous") == 0);
  const auto rows = read_csv(tmp.path / "instantaneous.csv");
  REQUIRE(rows.size() == 3);

  // A flag overrides the config value.
  CHECK(run("--config " + cfg.string() + " instantaneous --n-max 4") == 0);
  CHECK(read_csv(tmp.path / "instantaneous.csv").size() == 5);
}

TEST_CASE("QMEAS_OUT_DIR provides the default output directory") {
  TempDir tmp;
  const int status = std::system(("QMEAS_OUT_DIR=" + tmp.path.string() + " " +
                                  kCli + " instantaneous --n-max 2 >/dev/null 2>&1")
                                     .c_str());
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(fs::exists(tmp.path / "instantaneous.csv"));
  CHECK(read_csv(tmp.path / "instantaneous.csv").size() == 3);
}
