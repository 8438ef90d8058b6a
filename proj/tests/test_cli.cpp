#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gmrdr/pattern_spec.hpp"
#include "gmrdr/report_format.hpp"

using json = nlohmann::ordered_json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd =
      env + (env.empty() ? "" : " ") + GMRDR_CLI_PATH + " " + args +
      " 2>/dev/null";
  RunResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe)) {
    result.stdout_text.append(buf, got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> keys_of(const json& j) {
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) {
    keys.push_back(it.key());
  }
  return keys;
}

}  // namespace

TEST_CASE("number formatting pins ten significant digits") {
  CHECK(gmrdr::format_number(1.0) == "1");
  CHECK(gmrdr::format_number(0.25) == "0.25");
  CHECK(gmrdr::format_number(3.0992568990228280) == "3.099256899");
  CHECK(gmrdr::round_sig(1.0 / 3.0) == 0.3333333333);
}

TEST_CASE("pattern specs parse and validate") {
  CHECK(gmrdr::PatternSpec::parse("tail:2").tail_k == 2);
  CHECK(gmrdr::PatternSpec::parse("iid:0.3").loss_prob == 0.3);
  CHECK(gmrdr::PatternSpec::parse("1100").mask == "1100");
  CHECK_THROWS_AS(gmrdr::PatternSpec::parse("tail:x"), std::invalid_argument);
  CHECK_THROWS_AS(gmrdr::PatternSpec::parse("iid:1.5"), std::invalid_argument);
  CHECK_THROWS_AS(gmrdr::PatternSpec::parse("12"), std::invalid_argument);
  CHECK_THROWS_AS(gmrdr::PatternSpec::parse(""), std::invalid_argument);

  const auto spec = gmrdr::PatternSpec::parse("iid:0.5");
  const auto a = spec.expand(16, 7, 3);
  const auto b = spec.expand(16, 7, 3);
  const auto c = spec.expand(16, 7, 4);
  CHECK(a.received == b.received);
  CHECK(a.received != c.received);
}

TEST_CASE("rates emits the pinned CSV schema") {
  const auto r = run_cli("rates --M 1 --variance 1 --distortion 0.25");
  CHECK(r.exit_code == 0);
  const auto lines = lines_of(r.stdout_text);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "frame,sigma2_W,D_target,D_eff,rate_bits");
  CHECK(lines[1] == "1,1,0.25,0.25,1");
  CHECK(lines[2] == "sum,,,,1");
}

TEST_CASE("rates reproduces the worked three-frame sum") {
  const auto r =
      run_cli("rates --M 3 --rho 0.9 --variance 1 --distortion 0.1");
  CHECK(r.exit_code == 0);
  const auto lines = lines_of(r.stdout_text);
  REQUIRE(lines.size() == 5);
  CHECK(lines[4] == "sum,,,,3.099256899");
}

TEST_CASE("rates json carries the pinned key set and echoes the seed") {
  const auto r = run_cli(
      "rates --M 2 --rho 0.5 --variance 1 --distortion 0.1 --format json "
      "--seed 17");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.stdout_text);
  CHECK(keys_of(j) ==
        std::vector<std::string>{"command", "seed", "M", "n", "rho",
                                 "variances", "D_target", "D_eff", "sigma2_W",
                                 "rate_bits", "sum_rate_bits"});
  CHECK(j["command"] == "rates");
  CHECK(j["seed"] == 17);
}

TEST_CASE("kstep table contains the reduction rows") {
  const auto r =
      run_cli("kstep --M 5 --rho 0.9 --variance 1 --distortion 0.1");
  CHECK(r.exit_code == 0);
  const auto lines = lines_of(r.stdout_text);
  CHECK(lines[0] == "t,k,sigma2_Wtk");
  bool saw_worked = false;
  for (const auto& line : lines) {
    if (line == "5,2,0.40951") {
      saw_worked = true;
    }
  }
  CHECK(saw_worked);
  // k=0 rows equal the effective distortion, k=t+1 rows the variance.
  CHECK(lines[1] == "1,0,0.1");
  CHECK(lines[2] == "1,1,1");
}

TEST_CASE("simulate reports stats as json with exit 0 on pass") {
  const auto r = run_cli(
      "simulate --M 2 --rho 0.9 --variance 1 --distortion 0.1 --n 4096 "
      "--trials 16 --seed 3");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.stdout_text);
  CHECK(keys_of(j) ==
        std::vector<std::string>{"command", "seed", "M", "n", "rho",
                                 "variances", "D_target", "trials", "z_gate",
                                 "per_frame_mse", "per_frame_target",
                                 "standard_errors", "z_scores", "passed"});
  CHECK(j["passed"] == true);
  CHECK(j["trials"] == 16);
}

TEST_CASE("simulate distinguishes gate failure from usage errors") {
  const auto gate = run_cli(
      "simulate --M 1 --rho 0 --variance 1 --distortion 0.25 --n 256 "
      "--trials 4 --z-gate 0.0001 --seed 1");
  CHECK(gate.exit_code == 1);

  const auto usage =
      run_cli("simulate --M 1 --rho 1.5 --variance 1 --distortion 0.25");
  CHECK(usage.exit_code == 2);

  const auto both = run_cli(
      "simulate --M 1 --rho 0 --variance 1 --distortion 0.25 "
      "--budget-bits 1");
  CHECK(both.exit_code == 2);

  const auto neither = run_cli("simulate --M 1 --rho 0 --variance 1");
  CHECK(neither.exit_code == 2);
}

TEST_CASE("tiny smoke run still reports full stats") {
  const auto r = run_cli(
      "simulate --M 1 --rho 0 --variance 1 --distortion 0.25 --n 16 "
      "--trials 1 --seed 2");
  CHECK((r.exit_code == 0 || r.exit_code == 1));
  const json j = json::parse(r.stdout_text);
  CHECK(j["n"] == 16);
  CHECK(j["trials"] == 1);
  CHECK(j["per_frame_mse"].size() == 1);
}

TEST_CASE("simulate accepts a budget instead of distortions") {
  const auto r = run_cli(
      "simulate --M 2 --rho 0 --variance 1 --budget-bits 4 --n 1024 "
      "--trials 8");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.stdout_text);
  CHECK(j["D_target"][0] == doctest::Approx(0.0625).epsilon(1e-6));
}

TEST_CASE("erasure reports k per frame and matches simulate for tail:0") {
  const auto erased = run_cli(
      "erasure --M 5 --rho 0.9 --variance 1 --distortion 0.1 --n 512 "
      "--trials 8 --pattern 11100 --seed 11");
  CHECK(erased.exit_code == 0);
  const json je = json::parse(erased.stdout_text);
  CHECK(je["k_per_frame"] == json::array({0.0, 0.0, 0.0, 1.0, 2.0}));
  CHECK(je["pattern"] == "11100");

  const auto tail0 = run_cli(
      "erasure --M 2 --rho 0.9 --variance 1 --distortion 0.1 --n 512 "
      "--trials 8 --pattern tail:0 --seed 11");
  const auto plain = run_cli(
      "simulate --M 2 --rho 0.9 --variance 1 --distortion 0.1 --n 512 "
      "--trials 8 --seed 11");
  const json jt = json::parse(tail0.stdout_text);
  const json jp = json::parse(plain.stdout_text);
  CHECK(jt["per_frame_mse"] == jp["per_frame_mse"]);
  CHECK(jt["passed"] == jp["passed"]);
}

TEST_CASE("iid erasures are reproducible from the seed") {
  const std::string args =
      "erasure --M 4 --rho 0.9 --variance 1 --distortion 0.1 --n 256 "
      "--trials 8 --pattern iid:0.4 --seed 5 --z-gate 100";
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  CHECK(a.exit_code == b.exit_code);
  CHECK(a.stdout_text == b.stdout_text);

  const auto bad = run_cli(
      "erasure --M 4 --rho 0.9 --variance 1 --distortion 0.1 --pattern 11 ");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("allocate emits both policies with the pinned keys") {
  const auto common = run_cli("allocate --M 4 --rho 0 --variance 1 "
                              "--budget-bits 4");
  CHECK(common.exit_code == 0);
  const json jc = json::parse(common.stdout_text);
  CHECK(keys_of(jc) ==
        std::vector<std::string>{"command", "seed", "M", "n", "rho",
                                 "variances", "budget_bits", "policy",
                                 "weights", "D_target", "D_eff", "sigma2_W",
                                 "rate_bits", "sum_rate_bits",
                                 "objective_value", "iterations"});
  CHECK(jc["policy"] == "common");
  CHECK(jc["D_target"][0] == doctest::Approx(0.25).epsilon(1e-6));

  const auto weighted = run_cli(
      "allocate --M 2 --rho 0.9 --variance 1 --budget-bits 2 --weights 1 1");
  CHECK(weighted.exit_code == 0);
  const json jw = json::parse(weighted.stdout_text);
  CHECK(jw["policy"] == "weighted");
  CHECK(jw["sum_rate_bits"].get<double>() <= 2.0 + 1e-9);

  const auto missing = run_cli("allocate --M 2 --rho 0.9 --variance 1");
  CHECK(missing.exit_code == 2);
}

TEST_CASE("config file supplies defaults and flags override it") {
  const std::string path = "test_cli_config.json";
  {
    std::ofstream out(path);
    out << R"({"M":2,"rho":0.9,"variance":1.0,"distortion":0.1,"seed":21})";
  }
  const auto from_config = run_cli("rates --config " + path + " --format json");
  CHECK(from_config.exit_code == 0);
  const json jc = json::parse(from_config.stdout_text);
  CHECK(jc["M"] == 2);
  CHECK(jc["seed"] == 21);

  const auto overridden =
      run_cli("rates --config " + path + " --format json --seed 99 --M 3");
  const json jo = json::parse(overridden.stdout_text);
  CHECK(jo["M"] == 3);
  CHECK(jo["seed"] == 99);
  std::remove(path.c_str());

  const auto missing = run_cli("rates --config does_not_exist.json");
  CHECK(missing.exit_code == 2);
}

TEST_CASE("GMRDR_SEED overrides the default seed only") {
  const auto env_seed = run_cli(
      "rates --M 1 --variance 1 --distortion 0.25 --format json",
      "GMRDR_SEED=123");
  CHECK(json::parse(env_seed.stdout_text)["seed"] == 123);

  const auto flag_wins = run_cli(
      "rates --M 1 --variance 1 --distortion 0.25 --format json --seed 7",
      "GMRDR_SEED=123");
  CHECK(json::parse(flag_wins.stdout_text)["seed"] == 7);
}

TEST_CASE("output lands in the requested file") {
  const std::string path = "test_cli_output.csv";
  const auto r = run_cli("rates --M 1 --variance 1 --distortion 0.25 "
                         "--output " + path);
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.empty());
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "frame,sigma2_W,D_target,D_eff,rate_bits");
  in.close();
  std::remove(path.c_str());
}

TEST_CASE("per-frame variances and distortions are accepted") {
  const auto r = run_cli(
      "rates --M 3 --rho 0.5 --variance 1 2 0.5 --distortion 0.1 0.2 0.05 "
      "--format json");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.stdout_text);
  CHECK(j["variances"] == json::array({1.0, 2.0, 0.5}));

  const auto wrong = run_cli("rates --M 3 --rho 0.5 --variance 1 2 "
                             "--distortion 0.1");
  CHECK(wrong.exit_code == 2);
}
