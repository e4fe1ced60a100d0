#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "visco/io.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "viscolab_cli_test";

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> read_report(const fs::path& p) {
  std::map<std::string, std::string> out;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) out[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return out;
}

// Writes `config` and runs the CLI; returns the exit status.
int run_cli(const std::string& command, const std::string& name, const std::string& config,
            const std::string& extra = "") {
  fs::create_directories(kRoot);
  const fs::path cfg = kRoot / (name + ".cfg");
  std::ofstream(cfg) << config;
  const std::string cmd = std::string(VISCOLAB_CLI_PATH) + " " + command + " --config " + cfg.string() + " --out " +
                          (kRoot / name).string() + " " + extra + " > " + (kRoot / (name + ".log")).string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::vector<double>> csv_rows(const fs::path& p) {
  std::vector<std::vector<double>> rows;
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST(Cli, SimulateRestIsConstant) {
  ASSERT_EQ(run_cli("simulate", "rest", "command = simulate\ndim = 2\ncells = 6\ndt = 0.1\nt_end = 0.5\n"), 0);
  const auto rows = csv_rows(kRoot / "rest" / "diagnostics.csv");
  ASSERT_EQ(rows.size(), 6u);
  for (const auto& r : rows) {
    EXPECT_EQ(r[1], 0.0);
    EXPECT_EQ(r[4], 0.0);
    EXPECT_EQ(r[5], 1.0);
  }
  for (int k = 0; k < 6; ++k) {
    const auto check = visco::validate_vtk(kRoot / "rest" / ("snapshot_" + std::to_string(k) + ".vtk"));
    EXPECT_TRUE(check.ok) << check.message;
  }
}

TEST(Cli, SimulateCompressionBreaksDown) {
  ASSERT_EQ(run_cli("simulate", "comp",
                    "command = simulate\ndim = 1\ncells = 64\ndt = 1e-4\nt_end = 1\ninitial = compression\nrate = 100\n"),
            3);
  const auto rows = csv_rows(kRoot / "comp" / "diagnostics.csv");
  ASSERT_GE(rows.size(), 11u);
  for (std::size_t k = rows.size() - 10; k < rows.size(); ++k) EXPECT_LT(rows[k][5], rows[k - 1][5]);
  EXPECT_EQ(read_report(kRoot / "comp" / "report.txt")["termination"], "det_floor_hit");
}

TEST(Cli, UnwritableOutputIsInputError) {
  fs::create_directories(kRoot);
  std::ofstream(kRoot / "blocker") << "x";
  const fs::path cfg = kRoot / "blocked.cfg";
  std::ofstream(cfg) << "command = simulate\ncells = 4\ndt = 0.1\nt_end = 0.1\n";
  const std::string cmd = std::string(VISCOLAB_CLI_PATH) + " simulate --config " + cfg.string() + " --out " +
                          (kRoot / "blocker" / "sub").string() + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  EXPECT_EQ(WEXITSTATUS(status), 2);
}

TEST(Cli, CsvIsDeterministic) {
  const std::string cfg =
      "command = simulate\ndim = 2\ncells = 8\ndt = 0.01\nt_end = 0.2\ninitial = sinusoidal\namplitude = 0.2\n";
  ASSERT_EQ(run_cli("simulate", "det_a", cfg, "--seed 5"), 0);
  ASSERT_EQ(run_cli("simulate", "det_b", cfg, "--seed 5"), 0);
  EXPECT_EQ(slurp(kRoot / "det_a" / "diagnostics.csv"), slurp(kRoot / "det_b" / "diagnostics.csv"));
}

TEST(Cli, CheckCommand) {
  EXPECT_EQ(run_cli("check", "chk_rest", "command = check\nviscosity = z0doubleprime\ncells = 6\n"), 0);
  auto rep = read_report(kRoot / "chk_rest" / "report.txt");
  EXPECT_DOUBLE_EQ(std::stod(rep["gamma_sup"]), std::stod(rep["gamma_inf"]));
  EXPECT_EQ(rep["pass"], "true");

  EXPECT_EQ(run_cli("check", "chk_refl", "command = check\ninitial = reflected\ncells = 8\n"), 2);
  EXPECT_NE(slurp(kRoot / "chk_refl.log").find("Interpenetration"), std::string::npos);

  EXPECT_EQ(run_cli("check", "chk_deg", "command = check\nviscosity = zm\nm = 1\ncells = 4\n"), 1);
  rep = read_report(kRoot / "chk_deg" / "report.txt");
  EXPECT_EQ(rep["closed_form_gamma_worst"].rfind("DegenerateQ", 0), 0u);
}

TEST(Cli, KornCommand) {
  EXPECT_EQ(run_cli("korn", "korn_z0pp", "command = korn\nviscosity = z0doubleprime\n"), 0);
  auto rep = read_report(kRoot / "korn_z0pp" / "report.txt");
  EXPECT_EQ(rep["closed_form_gamma"], "2");
  EXPECT_EQ(rep["elliptic"], "true");

  EXPECT_EQ(run_cli("korn", "korn_neg", "command = korn\nfixture = negative_identity\n"), 1);
  EXPECT_EQ(read_report(kRoot / "korn_neg" / "report.txt")["elliptic"], "false");

  EXPECT_EQ(run_cli("korn", "korn_zm0", "command = korn\nviscosity = zm\nm = 0\n"), 0);
  rep = read_report(kRoot / "korn_zm0" / "report.txt");
  EXPECT_EQ(rep["closed_form_discrepancy"], "true");
  EXPECT_NEAR(std::stod(rep["gamma_est"]), 2.0, 1e-9);
  EXPECT_EQ(rep["closed_form_gamma"], "1");
}

TEST(Cli, ConvergenceBrokenStencilFails) {
  EXPECT_EQ(run_cli("convergence", "conv_broken",
                    "command = convergence\nfixture = broken_stencil\nlevels = 3\nconv_fine_dt = 1e-3\n"
                    "conv_fine_cells = 64\nt_end = 0.2\ndt = 0.02\n"),
            5);
  auto rep = read_report(kRoot / "conv_broken" / "report.txt");
  EXPECT_LT(std::abs(std::stod(rep["spatial_2_rate"])), 0.3);
}

TEST(Cli, InputErrors) {
  EXPECT_EQ(run_cli("convergence", "conv_one", "command = convergence\nlevels = 1\n"), 2);
  EXPECT_EQ(run_cli("simulate", "dup", "command = simulate\ndt = 0.1\ndt = 0.2\n"), 2);
  EXPECT_EQ(run_cli("korn", "mismatch", "command = simulate\n"), 2);
  EXPECT_EQ(run_cli("simulate", "pnorm", "command = simulate\ndim = 2\np_norm = 2\n"), 2);
  const int status = std::system((std::string(VISCOLAB_CLI_PATH) + " simulate --config /nonexistent > /dev/null 2>&1").c_str());
  EXPECT_EQ(WEXITSTATUS(status), 2);
  const int bad = std::system((std::string(VISCOLAB_CLI_PATH) + " frobnicate > /dev/null 2>&1").c_str());
  EXPECT_EQ(WEXITSTATUS(bad), 2);
}
