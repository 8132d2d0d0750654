#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <sys/wait.h>
#include <fstream>
#include <sstream>
#include <string>

#ifndef PREGWA_CLI_PATH
#error "PREGWA_CLI_PATH must be defined by the build"
#endif
#ifndef PREGWA_SOURCE_DIR
#error "PREGWA_SOURCE_DIR must be defined by the build"
#endif

namespace {

const std::string kCli = PREGWA_CLI_PATH;
const std::string kSrc = PREGWA_SOURCE_DIR;

struct CmdResult {
  int exit_code = -1;
  std::string output;
};

CmdResult run_cli(const std::string& args) {
  const std::string out_file = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                               "/pregwa_cli_test_out.txt";
  const std::string cmd = kCli + " " + args + " >" + out_file + " 2>&1";
  const int status = std::system(cmd.c_str());
  CmdResult r;
  r.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_dir(const std::string& tag) {
  const std::string d = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                        "/pregwa_cli_" + tag;
  if (std::system(("rm -rf " + d + " && mkdir -p " + d).c_str()) != 0)
    throw std::runtime_error("temp dir setup failed");
  return d;
}

// A small scenario that keeps CLI runs fast.
void write_small_config(const std::string& path, double rate_bps = 0.4e6) {
  std::ofstream out(path);
  out << R"({
  "name": "cli_small",
  "horizon_slots": 80,
  "slot_s": 1.0,
  "seed": 5,
  "layout": {"length_m": 2000.0, "bs": [{"along_m": 500.0}, {"along_m": 1500.0}]},
  "radio": {"noise_figure_db": 33.0},
  "traces": {"generate": {"n_users": 5, "speed_min_mps": 15.0, "speed_max_mps": 20.0,
                           "arrival_spread_slots": 20}},
  "sessions": {"uniform": {"streaming_rate_bps": )"
      << rate_bps << R"(, "duration_slots": 30}}
})";
}

}  // namespace

TEST_CASE("run writes a results csv and exits zero") {
  const auto dir = temp_dir("run");
  write_small_config(dir + "/cfg.json");
  const auto r = run_cli("run --config " + dir + "/cfg.json --strategy optimal --out-dir " + dir);
  CHECK(r.exit_code == 0);
  const std::string csv = slurp(dir + "/results.csv");
  CHECK(csv.rfind("scenario_id,strategy,streaming_rate_bps,n_users,mean_airtime,reduction_vs_es,"
                  "stall_slots,undelivered_bits,energy_proxy,status\n", 0) == 0);
  CHECK(csv.find("cli_small,optimal,") != std::string::npos);
  CHECK(csv.find(",ok\n") != std::string::npos);
}

TEST_CASE("bogus strategy is a usage error") {
  const auto dir = temp_dir("usage");
  write_small_config(dir + "/cfg.json");
  const auto r = run_cli("run --config " + dir + "/cfg.json --strategy bogus --out-dir " + dir);
  CHECK(r.exit_code == 1);
}

TEST_CASE("missing config file is a config error") {
  const auto r = run_cli("run --config /nonexistent/cfg.json --strategy optimal");
  CHECK(r.exit_code == 2);
}

TEST_CASE("schema violations are config errors with a diagnostic") {
  const auto dir = temp_dir("schema");
  std::ofstream(dir + "/bad.json") << "{\"horizon_slots\": 10}";
  const auto r = run_cli("run --config " + dir + "/bad.json");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("layout") != std::string::npos);
}

TEST_CASE("infeasible hard-mode scenario exits with the dedicated code") {
  const auto dir = temp_dir("infeasible");
  write_small_config(dir + "/cfg.json", 60e6);  // far beyond the clip ceiling
  const auto r = run_cli("run --config " + dir + "/cfg.json --strategy optimal --out-dir " + dir);
  CHECK(r.exit_code == 3);
  CHECK(slurp(dir + "/results.csv").find("infeasible") != std::string::npos);
}

TEST_CASE("verify accepts a dumped plan and rejects a tampered one") {
  const auto dir = temp_dir("verify");
  write_small_config(dir + "/cfg.json");
  const auto r = run_cli("run --config " + dir + "/cfg.json --strategy heuristic --out-dir " +
                         dir + " --dump-plan");
  REQUIRE(r.exit_code == 0);
  const std::string plan = dir + "/plan_heuristic.csv";

  CHECK(run_cli("verify --plan " + plan + " --config " + dir + "/cfg.json").exit_code == 0);

  // Hand-edit one cell to x = 2.0.
  std::string text = slurp(plan);
  const auto line_start = text.find('\n') + 1;
  const auto c1 = text.find(',', line_start);
  const auto c2 = text.find(',', c1 + 1);
  const auto c3 = text.find(',', c2 + 1);
  const auto c4 = text.find(',', c3 + 1);
  const auto c5 = text.find(',', c4 + 1);
  text = text.substr(0, c4 + 1) + "2.0" + text.substr(c5);
  std::ofstream(dir + "/tampered.csv") << text;
  const auto bad = run_cli("verify --plan " + dir + "/tampered.csv --config " + dir + "/cfg.json");
  CHECK(bad.exit_code != 0);
  CHECK(bad.output.find("bounds") != std::string::npos);

  // A plan whose slots exceed the scenario horizon is a dimension error.
  std::string widened = slurp(plan);
  widened += "heuristic,0,500,0,0.1,1000\n";
  std::ofstream(dir + "/widened.csv") << widened;
  const auto dim = run_cli("verify --plan " + dir + "/widened.csv --config " + dir + "/cfg.json");
  CHECK(dim.exit_code == 2);
  CHECK(dim.output.find("dimension") != std::string::npos);
}

TEST_CASE("sweep emits rows and an svg chart; identical seeds give identical bytes") {
  const auto dir_a = temp_dir("sweep_a");
  const auto dir_b = temp_dir("sweep_b");
  write_small_config(dir_a + "/cfg.json");
  std::ofstream(dir_a + "/sweep.json") << R"({
    "name": "mini",
    "base": "cfg.json",
    "parameter": "streaming_rate",
    "values": [0.2e6, 0.4e6],
    "strategies": ["equal_share", "heuristic", "optimal"]
  })";

  const auto r1 = run_cli("sweep --spec " + dir_a + "/sweep.json --out-dir " + dir_a +
                          " --workers 3");
  REQUIRE(r1.exit_code == 0);
  const auto r2 = run_cli("sweep --spec " + dir_a + "/sweep.json --out-dir " + dir_b +
                          " --workers 1");
  REQUIRE(r2.exit_code == 0);

  const std::string csv_a = slurp(dir_a + "/mini_results.csv");
  CHECK(csv_a == slurp(dir_b + "/mini_results.csv"));  // worker count cannot matter
  CHECK(std::count(csv_a.begin(), csv_a.end(), '\n') == 7);  // header + 2 values x 3 strategies

  const std::string svg = slurp(dir_a + "/mini.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<!-- data") != std::string::npos);
  CHECK(svg == slurp(dir_b + "/mini.svg"));
}

TEST_CASE("results csv matches the golden file") {
  const auto dir = temp_dir("golden");
  const auto r = run_cli("run --config " + kSrc + "/tests/golden/golden_scenario.json" +
                         " --strategy heuristic --out-dir " + dir);
  REQUIRE(r.exit_code == 0);
  const std::string expected = slurp(kSrc + "/tests/golden/results_golden.csv");
  REQUIRE(!expected.empty());
  CHECK(slurp(dir + "/results.csv") == expected);
}

TEST_CASE("soft mode turns an infeasible scenario into a stall report") {
  const auto dir = temp_dir("soft");
  write_small_config(dir + "/cfg.json", 60e6);
  const auto hard = run_cli("run --config " + dir + "/cfg.json --strategy optimal --out-dir " + dir);
  CHECK(hard.exit_code == 3);
  const auto soft = run_cli("run --config " + dir + "/cfg.json --strategy optimal --soft --out-dir " + dir);
  CHECK(soft.exit_code == 0);
  const std::string csv = slurp(dir + "/results.csv");
  CHECK(csv.find(",ok\n") != std::string::npos);
  // The unmet demand now shows up as stalls instead of infeasibility.
  std::istringstream rows(csv);
  std::string header, row;
  std::getline(rows, header);
  std::getline(rows, row);
  std::size_t pos = 0;
  for (int c = 0; c < 6; ++c) pos = row.find(',', pos) + 1;
  CHECK(std::stoi(row.substr(pos)) > 0);
}

TEST_CASE("sweep records partial failures per row and continues") {
  const auto dir = temp_dir("partial");
  write_small_config(dir + "/cfg.json");
  std::ofstream(dir + "/sweep.json") << R"({
    "name": "partial",
    "base": "cfg.json",
    "parameter": "streaming_rate",
    "values": [0.2e6, 80e6],
    "strategies": ["optimal"]
  })";
  const auto r = run_cli("sweep --spec " + dir + "/sweep.json --out-dir " + dir);
  CHECK(r.exit_code == 0);
  const std::string csv = slurp(dir + "/partial_results.csv");
  CHECK(csv.find(",ok\n") != std::string::npos);
  CHECK(csv.find(",infeasible\n") != std::string::npos);
}

TEST_CASE("dump-lp writes a text interchange program") {
  const auto dir = temp_dir("lpdump");
  write_small_config(dir + "/cfg.json");
  const auto r = run_cli("run --config " + dir + "/cfg.json --strategy optimal --out-dir " + dir +
                         " --dump-lp");
  REQUIRE(r.exit_code == 0);
  const std::string lp = slurp(dir + "/cli_small.lp");
  CHECK(lp.find("Minimize") != std::string::npos);
  CHECK(lp.find("Subject To") != std::string::npos);
  CHECK(lp.find("End") != std::string::npos);
}

TEST_CASE("PREGWA_OUT provides the default output directory") {
  const auto dir = temp_dir("envout");
  write_small_config(dir + "/cfg.json");
  const std::string cmd = "PREGWA_OUT=" + dir + " " + kCli + " run --config " + dir +
                          "/cfg.json --strategy equal_share >/dev/null 2>&1";
  REQUIRE(std::system(cmd.c_str()) == 0);
  CHECK(!slurp(dir + "/results.csv").empty());
}

TEST_CASE("type errors inside the config are schema errors, not internal ones") {
  const auto dir = temp_dir("types");
  std::ofstream(dir + "/bad.json") << R"({
    "horizon_slots": 10, "layout": {"length_m": 100.0, "bs": [{"along_m": 50.0}]},
    "traces": {"explicit": [{"user_id": 0, "positions": "oops"}]},
    "sessions": {"uniform": {"streaming_rate_bps": 1e6, "duration_slots": 5}}
  })";
  const auto r = run_cli("run --config " + dir + "/bad.json");
  CHECK(r.exit_code == 2);
}
