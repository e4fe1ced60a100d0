#pragma once

#include <ostream>
#include <vector>

#include "visco/config.hpp"

namespace visco {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitInputError = 2,
  kExitBreakdown = 3,
  kExitSolverFailure = 4,
  kExitConvergenceFailure = 5,
};

struct ConvergenceRow {
  int cells = 0;
  double dt = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> spatial;
  std::vector<ConvergenceRow> temporal;
  std::vector<double> spatial_rates;   // log2 of consecutive L2 error ratios
  std::vector<double> temporal_rates;
  double spatial_threshold = 0.0;
  double temporal_threshold = 0.0;
  bool completed = true;
  bool pass = false;
};

/// Required observed orders: (1.9, 0.9) in 1D, (1.7, 0.8) in 2D.
double spatial_rate_threshold(int dim);
double temporal_rate_threshold(int dim);

/// Decaying-sine manufactured solution driven over the h and dt sequences of `spec`.
ConvergenceStudy convergence_study(const RunSpec& spec);

int cmd_check(const RunSpec& spec, std::ostream& out, std::ostream& err);
int cmd_korn(const RunSpec& spec, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunSpec& spec, std::ostream& out, std::ostream& err);
int cmd_convergence(const RunSpec& spec, std::ostream& out, std::ostream& err);

/// Dispatches on spec.command; maps every library error to the documented exit code.
int run_command(const RunSpec& spec, std::ostream& out, std::ostream& err);

}  // namespace visco
