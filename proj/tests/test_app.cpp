#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "relaxns/app.hpp"

using namespace relaxns;
namespace fs = std::filesystem;

namespace {

const std::string kGas = R"(gas.Cv = 1
gas.R = 0.4
gas.mu = 1
gas.tau2 = 0.1
gas.kappa0 = 1
gas.Zk = 0.1
gas.Zalpha = 1
gas.sigma = 2
)";

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("relaxns_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(RELAXNS_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string block_value(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + " = ", 0) == 0) return line.substr(key.size() + 3);
  }
  return {};
}

}  // namespace

TEST(App, SimulateBackgroundWritesFiles) {
  const auto out = scratch("bg") / "nested";
  const RunConfig cfg = parse_config(kGas + "grid.xmin = -5\ngrid.xmax = 5\ngrid.N = 50\ntime.t_end = 0.2\n");
  std::ostringstream log;
  EXPECT_EQ(cmd_simulate(cfg, out, log), exit_code::completed);
  for (const char* f : {"series.csv", "thresholds.txt", "run.txt", "summary.csv", "snapshots/index.csv",
                        "snapshots/snapshot_00000.csv"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  const CsvTable series = read_csv_file(out / "series.csv");
  for (double F : series.numbers("F")) EXPECT_EQ(F, 0.0);
  EXPECT_EQ(block_value(slurp(out / "thresholds.txt"), "AS1"), "false");
  EXPECT_FALSE(fs::exists(out / "riccati.csv"));
}

TEST(App, SimulateIsByteDeterministic) {
  const std::string text = kGas + "grid.xmin = -8\ngrid.xmax = 8\ngrid.N = 80\ntime.t_end = 0.3\n"
                                  "init.preset = small_data\ninit.epsilon = 0.05\nrun.order = 2\n";
  const RunConfig cfg = parse_config(text);
  const auto a = scratch("det_a"), b = scratch("det_b");
  std::ostringstream log;
  cmd_simulate(cfg, a, log);
  cmd_simulate(cfg, b, log);
  EXPECT_EQ(slurp(a / "series.csv"), slurp(b / "series.csv"));
  EXPECT_EQ(slurp(a / "riccati.csv"), slurp(b / "riccati.csv"));
  // Every emitted CSV reads back.
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (e.path().extension() == ".csv") EXPECT_NO_THROW(read_csv_file(e.path())) << e.path();
  }
  const CsvTable r = read_csv_file(a / "riccati.csv");
  EXPECT_EQ(r.header, (std::vector<std::string>{"t", "F_measured", "y_riccati", "F_lowerbound_412"}));
}

TEST(App, ThresholdLandscape) {
  const std::string grid = "grid.xmin = -8\ngrid.xmax = 8\ngrid.N = 1600\ntime.t_end = 1\n";
  const RunConfig small = parse_config(kGas + grid + "init.u.kind = sideris\ninit.u.amplitude = 10\n"
                                                     "init.u.halfwidth = 4\n");
  std::ostringstream log;
  cmd_thresholds(small, nullptr, log);
  EXPECT_EQ(block_value(log.str(), "jointly_feasible"), "false");
  EXPECT_NEAR(std::stod(block_value(log.str(), "AS1_threshold")), 640.0, 1e-9);

  const std::string wide = R"(gas.Cv = 1
gas.R = 0.05
gas.mu = 1
gas.tau2 = 0.1
gas.kappa0 = 1
gas.Zk = 0.1
gas.Zalpha = 1
gas.sigma = 2
grid.xmin = -101
grid.xmax = 101
grid.N = 20200
time.t_end = 1
init.u.kind = sideris
init.u.amplitude = 33.85
init.u.halfwidth = 100
)";
  std::ostringstream log2;
  cmd_thresholds(parse_config(wide), nullptr, log2);
  EXPECT_EQ(block_value(log2.str(), "AS1"), "true");
  EXPECT_EQ(block_value(log2.str(), "AS3"), "true");
  EXPECT_EQ(block_value(log2.str(), "jointly_feasible"), "true");
}

TEST(App, SweepRowsInParameterOrder) {
  const auto out = scratch("sweep");
  const RunConfig cfg = parse_config(kGas + R"(grid.xmin = -8
grid.xmax = 8
grid.N = 64
time.t_end = 0.2
init.u.kind = sideris
init.u.amplitude = 0.01
init.u.halfwidth = 4
sweep.L = 0.1, 0.01
sweep.M = 4, 3
)");
  std::ostringstream log;
  EXPECT_EQ(cmd_sweep(cfg, out, 3, log), exit_code::completed);
  const CsvTable t = read_csv_file(out / "sweep.csv");
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(t.number(0, "L"), 0.1);
  EXPECT_EQ(t.number(0, "M"), 4.0);
  EXPECT_EQ(t.cell(0, "status"), "completed");
  EXPECT_EQ(t.cell(1, "status"), "error");  // M = 3 is below the admissible width
  EXPECT_EQ(t.number(2, "L"), 0.01);
  EXPECT_EQ(t.cell(2, "status"), "completed");
  EXPECT_EQ(t.cell(3, "status"), "error");

  // Worker count does not change the output.
  const auto out1 = scratch("sweep1");
  cmd_sweep(cfg, out1, 1, log);
  EXPECT_EQ(slurp(out / "sweep.csv"), slurp(out1 / "sweep.csv"));
}

TEST(App, OnePointSweepMatchesSimulateSummary) {
  const RunConfig cfg = parse_config(kGas + "grid.xmin = -8\ngrid.xmax = 8\ngrid.N = 64\ntime.t_end = 0.2\n"
                                            "init.u.kind = sideris\ninit.u.amplitude = 0.05\ninit.u.halfwidth = 4\n");
  const auto a = scratch("one_sim"), b = scratch("one_sweep");
  std::ostringstream log;
  cmd_simulate(cfg, a, log);
  cmd_sweep(cfg, b, 1, log);
  EXPECT_EQ(slurp(a / "summary.csv"), slurp(b / "sweep.csv"));
}

TEST(App, HyperbolicityAndPreview) {
  const auto out = scratch("hyp");
  const RunConfig cfg = parse_config(kGas + "grid.xmin = -6\ngrid.xmax = 6\ngrid.N = 60\ntime.t_end = 1\n"
                                            "init.u.kind = sideris\ninit.u.amplitude = 2\ninit.u.halfwidth = 4\n"
                                            "init.rho.kind = bump\ninit.rho.amplitude = 0.3\n");
  std::ostringstream log;
  EXPECT_EQ(cmd_hyperbolicity_check(cfg, out, log), exit_code::completed);
  EXPECT_EQ(block_value(log.str(), "hyperbolic"), "true");
  const CsvTable t = read_csv_file(out / "hyperbolicity.csv");
  EXPECT_EQ(t.rows.size(), 60u);
  EXPECT_EQ(t.header.back(), "lambda5");
  for (std::size_t r = 0; r < t.rows.size(); ++r) EXPECT_LE(t.number(r, "lambda1"), t.number(r, "lambda5"));

  EXPECT_EQ(cmd_init_preview(cfg, out, log), exit_code::completed);
  const CsvTable init = read_csv_file(out / "initial.csv");
  EXPECT_EQ(init.rows.size(), 60u);
  EXPECT_EQ(block_value(slurp(out / "admissibility.txt"), "c1_junctions_ok"), "true");
}

TEST(App, WorkersResolution) {
  RunConfig cfg;
  cfg.workers = 5;
  ::unsetenv("RELAXNS_WORKERS");
  EXPECT_EQ(resolve_workers(std::nullopt, cfg), 5);
  ::setenv("RELAXNS_WORKERS", "3", 1);
  EXPECT_EQ(resolve_workers(std::nullopt, cfg), 3);
  EXPECT_EQ(resolve_workers(2, cfg), 2);
  ::setenv("RELAXNS_WORKERS", "many", 1);
  EXPECT_THROW(resolve_workers(std::nullopt, cfg), ConfigError);
  ::unsetenv("RELAXNS_WORKERS");
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("cli");
  fs::create_directories(dir);
  const std::string base = kGas + "grid.xmin = -5\ngrid.xmax = 5\ngrid.N = 50\ntime.t_end = 0.1\n";
  std::ofstream(dir / "ok.cfg") << base;
  std::ofstream(dir / "bad.cfg") << base << "gas.R = 1\n";
  std::ofstream(dir / "floor.cfg") << base << "init.preset = small_data\ninit.epsilon = 0.01\ntime.dt_floor = 5\n";
  std::ofstream(dir / "blow.cfg") << kGas
                                  << "grid.xmin = -8\ngrid.xmax = 8\ngrid.N = 200\ntime.t_end = 0.5\n"
                                     "init.u.kind = sideris\ninit.u.amplitude = 10\ninit.u.halfwidth = 4\n"
                                     "breakdown.amplification = 3\nrun.order = 2\n";
  const std::string out = " --out " + (dir / "o").string();
  EXPECT_EQ(run_cli("simulate --config " + (dir / "ok.cfg").string() + out), 0);
  EXPECT_EQ(run_cli("simulate --config " + (dir / "bad.cfg").string() + out), 2);
  EXPECT_EQ(run_cli("simulate --config " + (dir / "floor.cfg").string() + out), 3);
  EXPECT_EQ(run_cli("simulate --config " + (dir / "blow.cfg").string() + out), 10);
  EXPECT_EQ(run_cli("simulate --config " + (dir / "ok.cfg").string() + " --order 3" + out), 2);
  EXPECT_EQ(run_cli("thresholds --config " + (dir / "ok.cfg").string()), 0);
  EXPECT_NE(run_cli("simulate"), 0);
}
