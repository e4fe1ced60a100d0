#include "visco/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace visco {

EnergyReport energy_report(const Trajectory& traj, const ConstitutiveModel& model, const Grid& grid,
                           const SpaceTimeFunction& forcing) {
  EnergyReport rep;
  rep.min_dissipation_density = std::numeric_limits<double>::infinity();
  const double vol = grid.cell_volume();

  double forcing_power_prev = 0.0;
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const FieldState& s = traj.snapshots[k];
    const std::vector<Matrix> f = gradient_field(grid, s.xi);
    const std::vector<Matrix> q = gradient_field(grid, s.v);

    double w_sum = 0.0, d_sum = 0.0;
    for (std::size_t c = 0; c < f.size(); ++c) {
      w_sum += energy(model.energy, f[c]);
      const double d = dissipation_density(model.viscosity, f[c], q[c]);
      rep.min_dissipation_density = std::min(rep.min_dissipation_density, d);
      d_sum += d;
    }

    double forcing_power = 0.0;
    if (forcing) {
      const NodalField fn = grid.sample([&](const Vector& x) { return forcing(s.time, x); });
      for (std::size_t node : grid.interior_nodes())
        for (int c = 0; c < grid.dim(); ++c) forcing_power += fn[node * grid.dim() + c] * s.v[node * grid.dim() + c];
      forcing_power *= vol;
    }

    rep.times.push_back(s.time);
    rep.kinetic.push_back(0.5 * nodal_inner(grid, s.v, s.v));
    rep.elastic.push_back(w_sum * vol);
    rep.dissipation_rate.push_back(d_sum * vol);
    if (k == 0) {
      rep.dissipated_cumulative.push_back(0.0);
      rep.work_of_forcing.push_back(0.0);
    } else {
      const double dt = s.time - rep.times[k - 1];
      rep.dissipated_cumulative.push_back(rep.dissipated_cumulative.back() +
                                          0.5 * dt * (rep.dissipation_rate[k] + rep.dissipation_rate[k - 1]));
      rep.work_of_forcing.push_back(rep.work_of_forcing.back() + 0.5 * dt * (forcing_power + forcing_power_prev));
    }
    forcing_power_prev = forcing_power;
    rep.balance_residual.push_back(rep.total(k) + rep.dissipated_cumulative[k] - rep.total(0) -
                                   rep.work_of_forcing[k]);
  }
  if (traj.snapshots.empty()) rep.min_dissipation_density = 0.0;
  return rep;
}

std::vector<std::pair<double, double>> min_det_series(const Trajectory& traj, const Grid& grid) {
  std::vector<std::pair<double, double>> out;
  out.reserve(traj.snapshots.size());
  for (const FieldState& s : traj.snapshots) out.emplace_back(s.time, min_cell_det(grid, s.xi));
  return out;
}

namespace {

// sum over interior nodes of |grad^2 u|^p, u a nodal vector field
double hessian_p_sum(const Grid& grid, const NodalField& u, double p) {
  const int n = grid.dim();
  const double h2 = grid.spacing() * grid.spacing();
  const std::size_t side = static_cast<std::size_t>(grid.nodes_per_side());
  double total = 0.0;
  for (std::size_t node : grid.interior_nodes()) {
    double sq = 0.0;
    for (int c = 0; c < n; ++c) {
      auto at = [&](long di, long dj) {
        const auto idx = static_cast<long>(node) + di + dj * static_cast<long>(side);
        return u[static_cast<std::size_t>(idx) * n + c];
      };
      const double uxx = (at(1, 0) - 2.0 * at(0, 0) + at(-1, 0)) / h2;
      if (n == 1) {
        sq += uxx * uxx;
        continue;
      }
      const double uyy = (at(0, 1) - 2.0 * at(0, 0) + at(0, -1)) / h2;
      const double uxy = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h2);
      sq += uxx * uxx + uyy * uyy + 2.0 * uxy * uxy;
    }
    total += std::pow(std::sqrt(sq), p);
  }
  return total;
}

double second_difference_p_sum(const Grid& grid, const NodalField& prev, const NodalField& cur,
                               const NodalField& next, double dt, double p) {
  const int n = grid.dim();
  double total = 0.0;
  for (std::size_t node = 0; node < grid.num_nodes(); ++node) {
    double sq = 0.0;
    for (int c = 0; c < n; ++c) {
      const std::size_t k = node * n + c;
      const double a = (next[k] - 2.0 * cur[k] + prev[k]) / (dt * dt);
      sq += a * a;
    }
    total += std::pow(std::sqrt(sq), p);
  }
  return total;
}

NodalField difference(const NodalField& a, const NodalField& b) {
  NodalField d(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) d[k] = a[k] - b[k];
  return d;
}

}  // namespace

ThetaReport theta_norm(const Trajectory& traj, const Trajectory& extension, const Grid& grid, double p,
                       std::optional<double> T) {
  if (!(p > grid.dim() + 2)) throw RangeError("p must exceed dim + 2");
  const auto& a = traj.snapshots;
  const auto& b = extension.snapshots;
  if (a.size() < 3 || b.size() < 3) throw MismatchedSampling("need at least three snapshots");

  const double dt = a[1].time - a[0].time;
  const double t_max = T.value_or(std::min(a.back().time, b.back().time));
  const double eps = 1e-9 * dt;

  std::size_t count = 0;
  while (count < a.size() && a[count].time <= t_max + eps) ++count;
  if (count > b.size()) throw MismatchedSampling("extension is shorter than the trajectory window");
  for (std::size_t k = 0; k < count; ++k) {
    if (std::abs(a[k].time - b[k].time) > eps) throw MismatchedSampling("snapshot times differ at index " + std::to_string(k));
    if (k > 0 && std::abs((a[k].time - a[k - 1].time) - dt) > eps) throw MismatchedSampling("snapshots are not uniformly spaced");
  }

  const double weight = dt * grid.cell_volume();
  double theta_sum = 0.0, d_sum = 0.0;
  for (std::size_t k = 1; k + 1 < count; ++k) {
    const NodalField e_prev = difference(a[k - 1].xi, b[k - 1].xi);
    const NodalField e_cur = difference(a[k].xi, b[k].xi);
    const NodalField e_next = difference(a[k + 1].xi, b[k + 1].xi);
    theta_sum += second_difference_p_sum(grid, e_prev, e_cur, e_next, dt, p);
    theta_sum += hessian_p_sum(grid, difference(a[k].v, b[k].v), p);

    d_sum += second_difference_p_sum(grid, b[k - 1].xi, b[k].xi, b[k + 1].xi, dt, p);
    d_sum += hessian_p_sum(grid, b[k].v, p);
  }

  ThetaReport rep;
  rep.T = t_max;
  rep.p_norm = p;
  rep.theta = std::pow(weight * theta_sum, 1.0 / p);
  rep.d_of_t = std::pow(weight * d_sum, 1.0 / p);
  return rep;
}

}  // namespace visco
