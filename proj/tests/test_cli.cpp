#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "commands.hpp"
#include "config.hpp"
#include "treesir/errors.hpp"
#include "treesir/io.hpp"

using namespace treesir;
using namespace treesir::cli;

namespace {

int run_binary(const std::string& args) {
  const std::string cmd = std::string(TREESIR_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config round-trips through its serialization") {
  RunConfig cfg;
  cfg.params.tau = 2.7182818284590452;
  cfg.params.lambda = 0.3333333333333333;
  cfg.params.k = 3;
  cfg.n_shells = 123;
  cfg.i0 = 0.0072;
  cfg.dt = 0.004;
  cfg.model = ModelKind::Kpp;
  cfg.from = MarchFrom::Both;
  cfg.experiment = Experiment::Sweep;
  cfg.k_list = "2,4";
  cfg.empirical = true;
  cfg.out = "elsewhere/";
  cfg.format = "csv";
  cfg.workers = 4;

  const RunConfig back = parse_config_text(serialize_config(cfg));
  CHECK(back == cfg);

  const RunConfig defaults;
  CHECK(parse_config_text(serialize_config(defaults)) == defaults);
}

TEST_CASE("later overrides win") {
  RunConfig cfg;
  apply_key_value(cfg, "lambda", "2.5", "test");
  apply_set_flag(cfg, "lambda=3.75");
  CHECK(cfg.params.lambda == 3.75);
}

TEST_CASE("unknown keys and malformed values carry diagnostics") {
  RunConfig cfg;
  CHECK_THROWS_AS(apply_key_value(cfg, "lambda_typo", "1", "file.cfg:7"), config_error);
  try {
    apply_key_value(cfg, "lambda_typo", "1", "file.cfg:7");
  } catch (const config_error& e) {
    CHECK(std::string(e.what()).find("file.cfg:7") != std::string::npos);
    CHECK(std::string(e.what()).find("lambda_typo") != std::string::npos);
  }
  CHECK_THROWS_AS(apply_key_value(cfg, "tau", "fast", "x:1"), config_error);
  CHECK_THROWS_AS(apply_key_value(cfg, "k", "2.5", "x:1"), config_error);
  CHECK_THROWS_AS(apply_set_flag(cfg, "no_equals_sign"), config_error);
}

TEST_CASE("config validation rejects out-of-contract values") {
  RunConfig cfg;
  cfg.dt = 1.0;  // far above the stability bound
  CHECK_THROWS_AS(cfg.validate(), config_error);

  cfg = RunConfig{};
  cfg.params.s0 = 1.5;
  CHECK_THROWS_AS(cfg.validate(), config_error);

  cfg = RunConfig{};
  cfg.sweep_count = 0;
  CHECK_THROWS_AS(cfg.validate(), config_error);

  cfg = RunConfig{};
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("derive reports the closed forms as json") {
  RunConfig cfg;  // defaults: tau=2 eta=1 lambda=1 s0=0.9 k=2
  std::ostringstream out;
  CHECK(cmd_derive(cfg, out) == 0);
  const auto j = nlohmann::json::parse(out.str());
  CHECK(j["r0"].get<double>() == doctest::Approx(1.8).epsilon(1e-14));
  CHECK(j["istar"].get<double>() == doctest::Approx(0.659188).epsilon(1e-4));
  CHECK(j["lambda_c"].get<double>() == doctest::Approx(4.662741699796952).epsilon(1e-10));
  CHECK(j["lambda_0"].get<double>() == doctest::Approx(1.1541560327111707).epsilon(1e-10));
  CHECK(j["s_inf"].get<double>() == doctest::Approx(0.240812).epsilon(1e-4));
  CHECK(j["c_star"].get<double>() == doctest::Approx(1.148858).epsilon(1e-4));

  // absent quantities serialize as null
  RunConfig sub;
  sub.params.s0 = 0.4;
  std::ostringstream out2;
  cmd_derive(sub, out2);
  const auto j2 = nlohmann::json::parse(out2.str());
  CHECK(j2["istar"].is_null());
  CHECK(j2["s_inf"].is_null());

  RunConfig lat;
  lat.params.k = 1;
  std::ostringstream out3;
  cmd_derive(lat, out3);
  const auto j3 = nlohmann::json::parse(out3.str());
  CHECK(j3["lambda_c"].is_null());
  CHECK(j3["lambda_0"].is_null());
  CHECK(j3["c_star"].get<double>() == doctest::Approx(1.842564).epsilon(1e-4));
}

TEST_CASE("csv headers are stable strings") {
  CHECK(std::string(kSirTrajectoryHeader) == "t,site,S,I,R");
  CHECK(std::string(kKppTrajectoryHeader) == "t,site,cumI");
  CHECK(std::string(kStationaryHeader) == "site,cumI_inf,Itot");
  CHECK(std::string(kSpeedSweepHeader) ==
        "k,lambda,c_analytic,gamma_star,c_empirical,rsq,flag");
}

TEST_CASE("sweep rows cover the degree list in order with empty cells") {
  RunConfig cfg;
  cfg.k_list = "1,2";
  cfg.sweep_lo = 0.5;
  cfg.sweep_hi = 6.0;
  cfg.sweep_count = 4;
  cfg.out = "test_sweep_";
  std::ostringstream out;
  CHECK(cmd_sweep(cfg, out) == 0);
  const std::string csv = slurp("test_sweep_sweep.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == kSpeedSweepHeader);
  int rows = 0;
  int empty_analytic = 0;
  while (std::getline(lines, line)) {
    ++rows;
    // third field is empty for k>=2 rows beyond the critical strength
    std::istringstream fields(line);
    std::string f;
    std::getline(fields, f, ',');  // k
    const int k = std::stoi(f);
    std::getline(fields, f, ',');  // lambda
    const double lambda = std::stod(f);
    std::getline(fields, f, ',');  // c_analytic
    if (f.empty()) {
      ++empty_analytic;
      CHECK(k == 2);
      CHECK(lambda > 4.66);
    }
  }
  CHECK(rows == 8);
  CHECK(empty_analytic == 1);  // only the k=2, lambda=6 row
  std::remove("test_sweep_sweep.csv");
  std::remove("test_sweep_manifest.json");
}

TEST_CASE("sweep row exactly at the critical strength reports zero speed") {
  RunConfig cfg;
  const double lc = 0.8 * (3.0 + 2.0 * std::sqrt(2.0));
  cfg.k_list = "2";
  cfg.sweep_count = 1;
  cfg.sweep_lo = cfg.sweep_hi = lc;
  cfg.out = "test_crit_";
  std::ostringstream out;
  cmd_sweep(cfg, out);
  std::istringstream lines(slurp("test_crit_sweep.csv"));
  std::string header, row, f;
  std::getline(lines, header);
  std::getline(lines, row);
  std::istringstream fields(row);
  std::getline(fields, f, ',');
  std::getline(fields, f, ',');
  std::getline(fields, f, ',');  // c_analytic
  CHECK(std::abs(std::stod(f)) <= 1e-10);
  std::getline(fields, f, ',');  // gamma_star
  CHECK(std::stod(f) == doctest::Approx(std::log(std::sqrt(2.0))).epsilon(1e-12));
  std::remove("test_crit_sweep.csv");
  std::remove("test_crit_manifest.json");
}

TEST_CASE("sweep is deterministic across worker counts") {
  RunConfig cfg;
  cfg.k_list = "1,2,3";
  cfg.sweep_count = 10;
  cfg.sweep_hi = 4.0;
  cfg.out = "test_par1_";
  std::ostringstream o1, o2;
  cmd_sweep(cfg, o1);
  cfg.workers = 4;
  cfg.out = "test_par4_";
  cmd_sweep(cfg, o2);
  CHECK(slurp("test_par1_sweep.csv") == slurp("test_par4_sweep.csv"));
  for (const char* f : {"test_par1_sweep.csv", "test_par1_manifest.json",
                        "test_par4_sweep.csv", "test_par4_manifest.json"})
    std::remove(f);
}

TEST_CASE("manifest records the resolved config and version") {
  RunConfig cfg;
  cfg.out = "test_man_";
  cfg.sweep_count = 3;
  cfg.k_list = "1";
  std::ostringstream out;
  cmd_sweep(cfg, out);
  const auto j = nlohmann::json::parse(slurp("test_man_manifest.json"));
  CHECK(j["version"].get<std::string>() == std::string("0.1.0"));
  CHECK(j["command"].get<std::string>() == "sweep");
  CHECK(j["config"]["tau"].get<double>() == 2.0);
  CHECK(j["config"]["sweep_count"].get<int>() == 3);
  std::remove("test_man_sweep.csv");
  std::remove("test_man_manifest.json");
}

TEST_CASE("exception to exit code mapping") {
  auto code_of = [](auto&& thrower) {
    try {
      thrower();
    } catch (...) {
      return exit_code_for_current_exception();
    }
    return 0;
  };
  CHECK(code_of([] { throw config_error("x"); }) == 2);
  CHECK(code_of([] { throw integrator_error("x"); }) == 3);
  CHECK(code_of([] { throw convergence_error("x", 1.0); }) == 3);
  CHECK(code_of([] { throw invalid_run_error("x"); }) == 1);
  CHECK(code_of([] { throw std::runtime_error("x"); }) == 2);
}

TEST_CASE("binary exit codes") {
  CHECK(run_binary("derive") == 0);
  CHECK(run_binary("derive --set k=1") == 0);
  CHECK(run_binary("derive --set bogus_key=1") == 2);
  CHECK(run_binary("derive --set s0=2.0") == 2);
  CHECK(run_binary("simulate --set dt=99") == 2);
  CHECK(run_binary("nonexistent-subcommand") == 2);
  CHECK(run_binary("--version") == 0);
}

TEST_CASE("simulate writes the trajectory schema it promises") {
  RunConfig cfg;
  cfg.params.k = 1;
  cfg.n_shells = 32;
  cfg.t_end = 5.0;
  cfg.snapshot_every = 1.0;
  cfg.out = "test_sim_";
  std::ostringstream out;
  CHECK(cmd_simulate(cfg, out) == 0);
  const std::string csv = slurp("test_sim_trajectory.csv");
  CHECK(csv.substr(0, csv.find('\n')) == kSirTrajectoryHeader);

  cfg.model = ModelKind::Kpp;
  std::ostringstream out2;
  CHECK(cmd_simulate(cfg, out2) == 0);
  const std::string csv2 = slurp("test_sim_trajectory.csv");
  CHECK(csv2.substr(0, csv2.find('\n')) == kKppTrajectoryHeader);

  std::remove("test_sim_trajectory.csv");
  std::remove("test_sim_manifest.json");
}

TEST_CASE("the default check battery passes end to end") {
  RunConfig cfg;
  cfg.out = "test_chk_";
  std::ostringstream out;
  CHECK(cmd_check(cfg, out) == 0);
  CHECK(out.str().find("FAIL") == std::string::npos);
  const auto report = nlohmann::json::parse(slurp("test_chk_check.json"));
  CHECK(report.is_array());
  CHECK(report.size() >= 15);
  for (const auto& entry : report) CHECK(entry["pass"].get<bool>());
  std::remove("test_chk_check.json");
  std::remove("test_chk_manifest.json");
}

TEST_CASE("stationary command writes profile and summary") {
  RunConfig cfg;
  cfg.params.k = 1;
  cfg.n_shells = 64;
  cfg.out = "test_stat_";
  std::ostringstream out;
  CHECK(cmd_stationary(cfg, out) == 0);
  const std::string csv = slurp("test_stat_stationary.csv");
  CHECK(csv.substr(0, csv.find('\n')) == kStationaryHeader);
  const auto j = nlohmann::json::parse(slurp("test_stat_stationary.json"));
  CHECK(j["tail"].get<std::string>() == "to_istar");
  CHECK(j["residual"].get<double>() <= 1e-8);
  std::remove("test_stat_stationary.csv");
  std::remove("test_stat_stationary.json");
  std::remove("test_stat_manifest.json");
}
