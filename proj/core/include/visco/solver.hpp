#pragma once

/**
 * @file solver.hpp
 *
 * @brief Semi-implicit time stepping for xi_tt = div(DW(grad xi) + Z(grad xi, grad xi_t)) + f
 *        on [0,1]^n with clamped boundary xi = X, xi_t = 0.
 *
 * Each step freezes F = grad xi^n, treats DW(F) explicitly and solves for the new velocity with
 * the viscous tangent M = D_Q Z(F, Q) frozen at the latest Picard iterate:
 *
 *     (v - v^n)/dt + L[M^k] v = div DW(F) + div(Z(F, grad v^k) - M^k grad v^k) + f,
 *
 * then xi^{n+1} = xi^n + dt v^{n+1}.
 */

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "visco/constitutive.hpp"
#include "visco/grid.hpp"

namespace visco {

struct FieldState {
  double time = 0.0;
  NodalField xi;
  NodalField v;
};

struct SolverConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  double picard_tol = 1e-10;
  int picard_max = 5;
  double det_floor = 1e-3;
  double linear_tol = 1e-10;
  int linear_max_iter = 5000;
  double p_norm = 5.0;
  int save_every = 1;
  /// For Q-linear viscosity the first Picard iterate is already the fixed point.
  bool skip_linear_refreeze = true;

  /// Throws RangeError naming the offending field.
  void validate(int dim) const;
  static SolverConfig defaults_for(int dim);
  bool operator==(const SolverConfig&) const = default;
};

enum class Termination { Completed, DetFloorHit, PicardDivergence, LinearSolverFailure };
std::string to_string(Termination t);

struct Trajectory {
  std::vector<FieldState> snapshots;
  Termination termination = Termination::Completed;
  double termination_time = 0.0;
  std::string message;
};

using VectorFunction = std::function<Vector(const Vector&)>;
using SpaceTimeFunction = std::function<Vector(double, const Vector&)>;

/// Samples initial data, forces the clamped boundary values and checks det grad xi0 > det_floor.
/// Throws BoundaryMismatch (supplied data violates clamping by > 1e-10) or Interpenetration.
FieldState init_state(const Grid& grid, const VectorFunction& xi0, const VectorFunction& xi1, double det_floor);

struct StepInfo {
  int picard_iterations = 0;
  std::vector<double> increments;  // ||v^{k+1} - v^k||_inf per iterate
  bool used_cg = false;
  bool used_dense_fallback = false;
};

/// One step of the scheme. `forcing` (nodal, evaluated at t + dt) may be empty.
/// Throws PicardDivergence, LinearSolveFailure or Interpenetration (precondition).
FieldState semi_implicit_step(const FieldState& state, const ConstitutiveModel& model, const Grid& grid,
                              const SolverConfig& cfg, std::span<const double> forcing = {},
                              StepInfo* info = nullptr);

/// Implicit-Euler heat flow for the velocity extension started from xi1, integrated in time
/// with the trapezoidal rule; snapshots hold (xi_bar, xi_bar_t). Throws BoundaryMismatch when
/// xi1 is not zero on the boundary.
Trajectory heat_extension(const Grid& grid, const NodalField& xi0, const NodalField& xi1, double dt, double t_end,
                          int save_every = 1);

/// Advances until t_end or breakdown. Never throws for in-flight failures; those end up in
/// termination and the last good state is kept.
Trajectory run(const ConstitutiveModel& model, const Grid& grid, const SolverConfig& cfg, const FieldState& state0,
               const SpaceTimeFunction& forcing = {});

/// Closed-form space-time deformation with the derivatives needed to build a forcing term.
struct ManufacturedSolution {
  std::function<Vector(double, const Vector&)> xi;
  std::function<Vector(double, const Vector&)> xi_t;
  std::function<Vector(double, const Vector&)> xi_tt;
  std::function<Matrix(double, const Vector&)> grad;
  std::function<Matrix(double, const Vector&)> grad_t;

  /// xi = X + amplitude e^{-t} phi(X) d with phi = sin(pi x) (1D) or sin(pi x) sin(pi y) (2D)
  /// and d = e1 (1D) or (1, 1/2) (2D).
  static ManufacturedSolution decaying_sine(int dim, double amplitude);
  /// xi = X for all t.
  static ManufacturedSolution rest(int dim);
};

/// f = xi*_tt - div(DW(grad xi*) + Z(grad xi*, grad xi*_t)), with the divergence of the
/// pointwise stress taken by a fourth-order central difference of step 1e-3 in X.
SpaceTimeFunction manufactured_forcing(const ConstitutiveModel& model, const ManufacturedSolution& exact);

struct ManufacturedErrors {
  double max_l2 = 0.0;
  double max_linf = 0.0;
  Termination termination = Termination::Completed;
  std::size_t snapshots = 0;
};

ManufacturedErrors manufactured_run(const ConstitutiveModel& model, const Grid& grid, const SolverConfig& cfg,
                                    const ManufacturedSolution& exact);

}  // namespace visco
