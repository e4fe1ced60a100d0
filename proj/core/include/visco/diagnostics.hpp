#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "visco/constitutive.hpp"
#include "visco/grid.hpp"
#include "visco/solver.hpp"

namespace visco {

/// Energy bookkeeping along a trajectory. Space integrals use the cell-midpoint rule, time
/// integrals the trapezoidal rule over the stored snapshots.
struct EnergyReport {
  std::vector<double> times;
  std::vector<double> kinetic;                // 1/2 int |v|^2
  std::vector<double> elastic;                // int W(grad xi)
  std::vector<double> dissipation_rate;       // int Z(F, Q) : Q
  std::vector<double> dissipated_cumulative;  // int_0^t int Z : Q
  std::vector<double> work_of_forcing;        // int_0^t int f . v
  std::vector<double> balance_residual;       // E(t) + dissipated - E(0) - work
  double min_dissipation_density = 0.0;       // pointwise minimum over all cells and snapshots

  double total(std::size_t k) const { return kinetic[k] + elastic[k]; }
};

EnergyReport energy_report(const Trajectory& traj, const ConstitutiveModel& model, const Grid& grid,
                           const SpaceTimeFunction& forcing = {});

std::vector<std::pair<double, double>> min_det_series(const Trajectory& traj, const Grid& grid);

struct ThetaReport {
  double T = 0.0;
  double theta = 0.0;   // || (xi - xi_bar)_tt, grad^2 (xi - xi_bar)_t ||_{L_p(Omega x (0,T))}
  double d_of_t = 0.0;  // || xi_bar_tt, grad^2 xi_bar_t ||_{L_p(Omega x (0,T))}
  double p_norm = 0.0;
};

/// Discrete Theta(T) and D(T): centered second differences in time (first and last snapshot
/// dropped), centered second differences in space at interior nodes. Both trajectories must be
/// sampled at the same uniformly spaced times up to T; throws MismatchedSampling otherwise.
/// `T` defaults to the last common time.
ThetaReport theta_norm(const Trajectory& traj, const Trajectory& extension, const Grid& grid, double p,
                       std::optional<double> T = std::nullopt);

}  // namespace visco
