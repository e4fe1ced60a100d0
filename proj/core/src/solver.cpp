#include "visco/solver.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace visco {

namespace {

constexpr double kBoundaryTol = 1e-10;
constexpr double kPicardGrowth = 10.0;
constexpr Eigen::Index kDenseFallbackLimit = 2000;

long step_count(double t_end, double dt) { return std::max(1L, std::lround(t_end / dt)); }

double linf(const Eigen::VectorXd& x) { return x.size() == 0 ? 0.0 : x.lpNorm<Eigen::Infinity>(); }

Eigen::VectorXd solve_system(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& b,
                             const Eigen::VectorXd& guess, bool symmetric, const SolverConfig& cfg,
                             StepInfo* info) {
  Eigen::VectorXd x;
  bool ok = false;
  if (symmetric) {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(cfg.linear_tol);
    cg.setMaxIterations(cfg.linear_max_iter);
    cg.compute(a);
    x = cg.solveWithGuess(b, guess);
    ok = cg.info() == Eigen::Success;
  } else {
    Eigen::BiCGSTAB<Eigen::SparseMatrix<double>> bicg;
    bicg.setTolerance(cfg.linear_tol);
    bicg.setMaxIterations(cfg.linear_max_iter);
    bicg.compute(a);
    x = bicg.solveWithGuess(b, guess);
    ok = bicg.info() == Eigen::Success;
  }
  if (info) info->used_cg = symmetric;
  if (ok && x.allFinite()) return x;

  if (a.rows() >= kDenseFallbackLimit)
    throw LinearSolveFailure("Krylov solver did not reach tolerance " + std::to_string(cfg.linear_tol) + " in " +
                             std::to_string(cfg.linear_max_iter) + " iterations");
  const Eigen::MatrixXd dense(a);
  x = dense.partialPivLu().solve(b);
  if (!x.allFinite()) throw LinearSolveFailure("dense fallback produced non-finite values");
  if (info) info->used_dense_fallback = true;
  return x;
}

}  // namespace

void SolverConfig::validate(int dim) const {
  if (!(dt > 0.0)) throw RangeError("dt must be positive");
  if (!(t_end > 0.0)) throw RangeError("t_end must be positive");
  if (!(picard_tol >= 0.0)) throw RangeError("picard_tol must be nonnegative");
  if (picard_max < 1) throw RangeError("picard_max must be at least 1");
  if (!(det_floor > 0.0)) throw RangeError("det_floor must be positive");
  if (!(linear_tol > 0.0)) throw RangeError("linear_tol must be positive");
  if (linear_max_iter < 1) throw RangeError("linear_max_iter must be at least 1");
  if (!(p_norm > dim + 2)) throw RangeError("p_norm must exceed dim + 2 = " + std::to_string(dim + 2));
  if (save_every < 1) throw RangeError("save_every must be at least 1");
}

SolverConfig SolverConfig::defaults_for(int dim) {
  SolverConfig cfg;
  cfg.p_norm = dim == 1 ? 4.0 : 5.0;
  return cfg;
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::Completed: return "completed";
    case Termination::DetFloorHit: return "det_floor_hit";
    case Termination::PicardDivergence: return "picard_divergence";
    case Termination::LinearSolverFailure: return "linear_solver_failure";
  }
  return "unknown";
}

FieldState init_state(const Grid& grid, const VectorFunction& xi0, const VectorFunction& xi1, double det_floor) {
  const int n = grid.dim();
  FieldState s;
  s.xi = grid.sample(xi0);
  s.v = grid.sample(xi1);
  for (std::size_t node : grid.boundary_nodes()) {
    const Vector x = grid.node_coord(node);
    for (int c = 0; c < n; ++c) {
      const std::size_t k = node * n + c;
      if (std::abs(s.xi[k] - x[c]) > kBoundaryTol || std::abs(s.v[k]) > kBoundaryTol)
        throw BoundaryMismatch("initial data violate the clamped boundary at node " + std::to_string(node));
      s.xi[k] = x[c];
      s.v[k] = 0.0;
    }
  }
  const double mdet = min_cell_det(grid, s.xi);
  if (!(mdet > det_floor))
    throw Interpenetration("min det grad xi0 = " + std::to_string(mdet) + " does not exceed det_floor " +
                           std::to_string(det_floor));
  return s;
}

FieldState semi_implicit_step(const FieldState& state, const ConstitutiveModel& model, const Grid& grid,
                              const SolverConfig& cfg, std::span<const double> forcing, StepInfo* info) {
  const double mdet = min_cell_det(grid, state.xi);
  if (!(mdet > cfg.det_floor)) throw Interpenetration("min det grad xi = " + std::to_string(mdet));

  const std::vector<Matrix> f = gradient_field(grid, state.xi);
  std::vector<Matrix> elastic(f.size());
  for (std::size_t c = 0; c < f.size(); ++c) elastic[c] = piola_stress(model.energy, f[c]);

  Eigen::VectorXd rhs_base = gather_interior(grid, state.v) / cfg.dt + gather_interior(grid, stress_divergence(grid, elastic));
  if (!forcing.empty()) rhs_base += gather_interior(grid, forcing);

  const bool linear = model.viscosity.linear_in_q();
  const auto dofs = static_cast<Eigen::Index>(grid.num_interior_dofs());
  Eigen::SparseMatrix<double> identity(dofs, dofs);
  identity.setIdentity();

  NodalField v_iter = state.v;
  Eigen::VectorXd x_iter = gather_interior(grid, v_iter);
  std::vector<FourthOrderTensor> tangent(f.size());
  std::vector<Matrix> correction(f.size());
  double prev_inc = std::numeric_limits<double>::infinity();

  if (info) *info = StepInfo{};
  for (int k = 0; k < cfg.picard_max; ++k) {
    const std::vector<Matrix> q = gradient_field(grid, v_iter);
    for (std::size_t c = 0; c < f.size(); ++c) {
      tangent[c] = viscous_tangent_q(model.viscosity, f[c], q[c]);
      if (!linear) correction[c] = viscous_stress(model.viscosity, f[c], q[c]) - tangent[c].apply(q[c]);
    }
    const ViscousOperator op = assemble_viscous_operator(grid, tangent);
    Eigen::VectorXd rhs = rhs_base;
    if (!linear) rhs += gather_interior(grid, stress_divergence(grid, correction));
    const Eigen::SparseMatrix<double> a = identity / cfg.dt + op.matrix();

    const Eigen::VectorXd x_next = solve_system(a, rhs, x_iter, op.symmetric(), cfg, info);
    const double inc = linf(x_next - x_iter);
    if (info) {
      info->picard_iterations = k + 1;
      info->increments.push_back(inc);
    }
    if (!std::isfinite(inc) || (k > 0 && inc > kPicardGrowth * prev_inc && inc > cfg.picard_tol))
      throw PicardDivergence("Picard increment grew from " + std::to_string(prev_inc) + " to " + std::to_string(inc));

    x_iter = x_next;
    scatter_interior(grid, x_iter, v_iter);
    if (inc <= cfg.picard_tol) break;
    if (linear && cfg.skip_linear_refreeze) break;
    prev_inc = inc;
  }

  FieldState next;
  next.time = state.time + cfg.dt;
  next.v = std::move(v_iter);
  next.xi = state.xi;
  const int n = grid.dim();
  for (std::size_t node : grid.interior_nodes())
    for (int c = 0; c < n; ++c) next.xi[node * n + c] += cfg.dt * next.v[node * n + c];
  return next;
}

Trajectory heat_extension(const Grid& grid, const NodalField& xi0, const NodalField& xi1, double dt, double t_end,
                          int save_every) {
  const int n = grid.dim();
  for (std::size_t node : grid.boundary_nodes())
    for (int c = 0; c < n; ++c)
      if (std::abs(xi1[node * n + c]) > kBoundaryTol)
        throw BoundaryMismatch("velocity extension data must vanish on the boundary");

  const std::vector<FourthOrderTensor> id(grid.num_cells(), FourthOrderTensor::identity(n));
  const ViscousOperator lap = assemble_viscous_operator(grid, id);
  const auto dofs = static_cast<Eigen::Index>(grid.num_interior_dofs());
  Eigen::SparseMatrix<double> identity(dofs, dofs);
  identity.setIdentity();
  const Eigen::SparseMatrix<double> a = identity / dt + lap.matrix();

  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(1e-12);
  cg.compute(a);

  Trajectory traj;
  FieldState s{0.0, xi0, NodalField(xi1.size(), 0.0)};
  Eigen::VectorXd w = gather_interior(grid, xi1);
  scatter_interior(grid, w, s.v);
  traj.snapshots.push_back(s);

  const long steps = step_count(t_end, dt);
  for (long k = 1; k <= steps; ++k) {
    const Eigen::VectorXd w_next = cg.solveWithGuess(w / dt, w);
    if (cg.info() != Eigen::Success) throw LinearSolveFailure("heat extension solve did not converge");
    const Eigen::VectorXd xi_bar = gather_interior(grid, s.xi) + 0.5 * dt * (w + w_next);
    scatter_interior(grid, xi_bar, s.xi);
    scatter_interior(grid, w_next, s.v);
    s.time = static_cast<double>(k) * dt;
    w = w_next;
    if (k % save_every == 0 || k == steps) traj.snapshots.push_back(s);
  }
  traj.termination_time = s.time;
  return traj;
}

Trajectory run(const ConstitutiveModel& model, const Grid& grid, const SolverConfig& cfg, const FieldState& state0,
               const SpaceTimeFunction& forcing) {
  Trajectory traj;
  traj.snapshots.push_back(state0);
  FieldState state = state0;
  const double t0 = state0.time;

  if (!(min_cell_det(grid, state.xi) > cfg.det_floor)) {
    traj.termination = Termination::DetFloorHit;
    traj.termination_time = t0;
    traj.message = "initial state below det_floor";
    return traj;
  }

  const long steps = step_count(cfg.t_end - t0, cfg.dt);
  NodalField f_nodal;
  for (long s = 1; s <= steps; ++s) {
    const double t_next = t0 + static_cast<double>(s) * cfg.dt;
    if (forcing) f_nodal = grid.sample([&](const Vector& x) { return forcing(t_next, x); });

    FieldState next;
    try {
      next = semi_implicit_step(state, model, grid, cfg, f_nodal);
    } catch (const PicardDivergence& e) {
      traj.termination = Termination::PicardDivergence;
      traj.termination_time = t_next;
      traj.message = e.what();
      break;
    } catch (const LinearSolveFailure& e) {
      traj.termination = Termination::LinearSolverFailure;
      traj.termination_time = t_next;
      traj.message = e.what();
      break;
    } catch (const Error& e) {
      traj.termination = Termination::DetFloorHit;
      traj.termination_time = state.time;
      traj.message = e.what();
      break;
    }
    next.time = t_next;
    state = std::move(next);

    const double mdet = min_cell_det(grid, state.xi);
    if (!(mdet > cfg.det_floor)) {
      traj.snapshots.push_back(state);
      traj.termination = Termination::DetFloorHit;
      traj.termination_time = t_next;
      traj.message = "min det grad xi = " + std::to_string(mdet);
      return traj;
    }
    if (s % cfg.save_every == 0 || s == steps) traj.snapshots.push_back(state);
  }
  if (traj.termination == Termination::Completed) traj.termination_time = state.time;
  return traj;
}

ManufacturedSolution ManufacturedSolution::decaying_sine(int dim, double amplitude) {
  using std::numbers::pi;
  ManufacturedSolution s;
  if (dim == 1) {
    s.xi = [=](double t, const Vector& x) { return Vector{x[0] + amplitude * std::exp(-t) * std::sin(pi * x[0])}; };
    s.xi_t = [=](double t, const Vector& x) { return Vector{-amplitude * std::exp(-t) * std::sin(pi * x[0])}; };
    s.xi_tt = [=](double t, const Vector& x) { return Vector{amplitude * std::exp(-t) * std::sin(pi * x[0])}; };
    s.grad = [=](double t, const Vector& x) {
      return Matrix{{1.0 + amplitude * pi * std::exp(-t) * std::cos(pi * x[0])}};
    };
    s.grad_t = [=](double t, const Vector& x) { return Matrix{{-amplitude * pi * std::exp(-t) * std::cos(pi * x[0])}}; };
    return s;
  }
  const Vector d{1.0, 0.5};
  auto phi = [](const Vector& x) { return std::sin(pi * x[0]) * std::sin(pi * x[1]); };
  auto grad_phi = [](const Vector& x) {
    return Vector{pi * std::cos(pi * x[0]) * std::sin(pi * x[1]), pi * std::sin(pi * x[0]) * std::cos(pi * x[1])};
  };
  s.xi = [=](double t, const Vector& x) { return x + (amplitude * std::exp(-t) * phi(x)) * d; };
  s.xi_t = [=](double t, const Vector& x) { return (-amplitude * std::exp(-t) * phi(x)) * d; };
  s.xi_tt = [=](double t, const Vector& x) { return (amplitude * std::exp(-t) * phi(x)) * d; };
  s.grad = [=](double t, const Vector& x) {
    return Matrix::identity(2) + (amplitude * std::exp(-t)) * outer(d, grad_phi(x));
  };
  s.grad_t = [=](double t, const Vector& x) { return (-amplitude * std::exp(-t)) * outer(d, grad_phi(x)); };
  return s;
}

ManufacturedSolution ManufacturedSolution::rest(int dim) {
  ManufacturedSolution s;
  s.xi = [](double, const Vector& x) { return x; };
  s.xi_t = [dim](double, const Vector&) { return Vector(dim); };
  s.xi_tt = [dim](double, const Vector&) { return Vector(dim); };
  s.grad = [dim](double, const Vector&) { return Matrix::identity(dim); };
  s.grad_t = [dim](double, const Vector&) { return Matrix(dim); };
  return s;
}

SpaceTimeFunction manufactured_forcing(const ConstitutiveModel& model, const ManufacturedSolution& exact) {
  return [model, exact](double t, const Vector& x) {
    const int n = x.dim();
    auto stress = [&](const Vector& y) {
      const Matrix g = exact.grad(t, y);
      return piola_stress(model.energy, g) + viscous_stress(model.viscosity, g, exact.grad_t(t, y));
    };
    constexpr double delta = 1e-3;
    Vector div(n);
    for (int j = 0; j < n; ++j) {
      auto at = [&](double s) {
        Vector y = x;
        y[j] += s * delta;
        return stress(y);
      };
      const Matrix dp = (1.0 / (12.0 * delta)) * (8.0 * (at(1) - at(-1)) - (at(2) - at(-2)));
      for (int i = 0; i < n; ++i) div[i] += dp(i, j);
    }
    return exact.xi_tt(t, x) - div;
  };
}

ManufacturedErrors manufactured_run(const ConstitutiveModel& model, const Grid& grid, const SolverConfig& cfg,
                                    const ManufacturedSolution& exact) {
  const FieldState s0 = init_state(
      grid, [&](const Vector& x) { return exact.xi(0.0, x); }, [&](const Vector& x) { return exact.xi_t(0.0, x); },
      cfg.det_floor);
  const Trajectory traj = run(model, grid, cfg, s0, manufactured_forcing(model, exact));

  ManufacturedErrors err;
  err.termination = traj.termination;
  err.snapshots = traj.snapshots.size();
  for (const FieldState& s : traj.snapshots) {
    const NodalField ref = grid.sample([&](const Vector& x) { return exact.xi(s.time, x); });
    double sq = 0.0;
    for (std::size_t k = 0; k < ref.size(); ++k) {
      const double e = s.xi[k] - ref[k];
      sq += e * e;
      err.max_linf = std::max(err.max_linf, std::abs(e));
    }
    err.max_l2 = std::max(err.max_l2, std::sqrt(sq * grid.cell_volume()));
  }
  return err;
}

}  // namespace visco
