#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

// End-to-end checks of the installed command line: exit codes, output
// determinism, the config-file override chain, and the tower round trip.
// Each case shells out to the real binary so the argv parsing and file
// plumbing are exercised, not simulated.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

using json = nlohmann::json;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

std::string slurp(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  std::ostringstream buf;
  buf << file.rdbuf();
  return buf.str();
}

// Runs the CLI with stdout captured to a scratch file and stderr dropped.
// std::system goes through the shell, so arguments here are fixed strings
// chosen by the tests, never external input.
RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string capture =
      "test_cli_capture_" + std::to_string(counter++) + ".tmp";
  const std::string command = std::string(SKEWLAB_CLI_PATH) + " " + args +
                              " > " + capture + " 2> /dev/null";
  const int status = std::system(command.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(capture);
  std::remove(capture.c_str());
  return r;
}

}  // namespace

TEST_CASE("usage errors and unknown flags exit 1") {
  CHECK(run_cli("").exit_code == 1);
  CHECK(run_cli("orbit --bogus 3").exit_code == 1);
  CHECK(run_cli("series --kind x").exit_code == 1);
  CHECK(run_cli("nonsense").exit_code == 1);
  CHECK(run_cli("measure --mode cut --delta 1.5").exit_code == 1);
  CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("constants runs on defaults and echoes the config") {
  RunResult r = run_cli("constants");
  REQUIRE(r.exit_code == 0);
  json doc = json::parse(r.out);
  CHECK(doc["tool"] == "skewlab");
  CHECK(doc["config"]["K"] == 3);
  CHECK(doc["config"]["seed"] == 0);
  CHECK(doc["result"]["v"] == json::array({"1", "4", "37"}));
  CHECK(doc["result"]["alpha_hex"] == "0x1.200000001p-1");
  CHECK(doc["budgets"].contains("alpha_tail"));
}

TEST_CASE("repeated runs are byte-identical for fixed config and seed") {
  const std::string cmd = "measure --mode cut --n 5000 --seed 17";
  RunResult a = run_cli(cmd);
  RunResult b = run_cli(cmd);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK_FALSE(a.out.empty());

  RunResult c = run_cli("measure --mode cut --n 5000 --seed 18");
  CHECK(c.out != a.out);
}

TEST_CASE("config file sets defaults and flags override it") {
  const std::string cfg_path = "test_cli_config.tmp";
  {
    std::ofstream cfg(cfg_path);
    cfg << "K=2\nseed=11\n";
  }
  json from_file =
      json::parse(run_cli("--config " + cfg_path + " constants").out);
  CHECK(from_file["config"]["K"] == 2);
  CHECK(from_file["config"]["seed"] == 11);

  json overridden =
      json::parse(run_cli("--config " + cfg_path + " --K 3 constants").out);
  CHECK(overridden["config"]["K"] == 3);
  CHECK(overridden["config"]["seed"] == 11);
  std::remove(cfg_path.c_str());
}

TEST_CASE("orbit csv has the documented column order") {
  RunResult r = run_cli("orbit --start 0.25,0 --n 2 --emit csv");
  REQUIRE(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string line;
  int data_rows = 0;
  bool saw_header = false;
  while (std::getline(lines, line)) {
    if (!line.empty() && line[0] == '#') {
      continue;  // envelope comments precede the header
    }
    if (!saw_header) {
      CHECK(line == "step,theta1_hex,theta2_hex,theta1_f64,theta2_f64");
      saw_header = true;
    } else if (!line.empty()) {
      ++data_rows;
    }
  }
  CHECK(saw_header);
  CHECK(data_rows == 3);  // start row plus two steps
}

TEST_CASE("density emits a verified certificate and exits 0") {
  RunResult r = run_cli("density --target 0.5,0.5 --eps 0.05");
  REQUIRE(r.exit_code == 0);
  json doc = json::parse(r.out);
  CHECK(doc["result"]["verify"]["ok"] == true);
  CHECK(doc["result"]["achieved_distance"].get<double>() <= 0.05);
  // The count fields are strings: decimal or a power-of-two description.
  CHECK(doc["result"]["total_steps"].is_string());
}

TEST_CASE("steer reports the closed-form block") {
  json doc = json::parse(run_cli("steer --s 2").out);
  CHECK(doc["result"]["block_length"] == "536870912");
  CHECK(doc["result"]["u_re"].get<double>() ==
        doctest::Approx(-0.0785296).epsilon(1e-4));
  CHECK(doc["result"]["bound_holds"] == true);
  CHECK(run_cli("steer --s 5").exit_code == 1);
}

TEST_CASE("tower output round-trips through its own verifier") {
  const std::string tower_path = "test_cli_tower.tmp";
  RunResult built = run_cli("tower --genus 2 --max-word-len 2 --depth 3 "
                            "--output " +
                            tower_path);
  REQUIRE(built.exit_code == 0);
  json doc = json::parse(slurp(tower_path));
  CHECK(doc["result"]["all_open"] == true);
  CHECK(doc["result"]["verified"] == true);
  CHECK(doc["result"]["word_count"] == 64);

  RunResult verified = run_cli("tower verify " + tower_path);
  CHECK(verified.exit_code == 0);

  // Swapping a word's generator invalidates its witness: exit 2.
  json bad = doc;
  json& word = bad["result"]["entries"][0]["word"];
  for (json& letter : word) {
    const int c = letter.get<int>();
    letter = c > 0 ? (c % 4) + 1 : -((-c % 4) + 1);
  }
  const std::string bad_path = "test_cli_tower_bad.tmp";
  {
    std::ofstream out(bad_path);
    out << bad.dump(2);
  }
  RunResult tampered = run_cli("tower verify " + bad_path);
  CHECK(tampered.exit_code == 2);

  RunResult missing = run_cli("tower verify does_not_exist.tmp");
  CHECK(missing.exit_code == 1);

  std::remove(tower_path.c_str());
  std::remove(bad_path.c_str());
}
