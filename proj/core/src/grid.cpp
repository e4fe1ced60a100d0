#include "visco/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace visco {

Grid Grid::build(int dim, int cells) {
  if (dim != 1 && dim != 2) throw InvalidConfig("grid dimension must be 1 or 2, got " + std::to_string(dim));
  if (cells < 4) throw InvalidConfig("grid needs at least 4 cells per side, got " + std::to_string(cells));

  Grid g;
  g.dim_ = dim;
  g.cells_ = cells;
  g.h_ = 1.0 / cells;
  const std::size_t side = static_cast<std::size_t>(cells) + 1;
  g.num_nodes_ = dim == 1 ? side : side * side;
  g.num_cells_ = dim == 1 ? static_cast<std::size_t>(cells) : static_cast<std::size_t>(cells) * cells;
  g.interior_index_.assign(g.num_nodes_, -1);
  for (std::size_t k = 0; k < g.num_nodes_; ++k) {
    const std::size_t i = k % side, j = k / side;
    const bool boundary = i == 0 || i == side - 1 || (dim == 2 && (j == 0 || j == side - 1));
    if (boundary) {
      g.boundary_.push_back(k);
    } else {
      g.interior_index_[k] = static_cast<long>(g.interior_.size());
      g.interior_.push_back(k);
    }
  }
  return g;
}

Grid Grid::with_stencil_defect(double factor) const {
  Grid g = *this;
  g.stencil_factor_ = factor;
  return g;
}

Vector Grid::node_coord(std::size_t node) const {
  const std::size_t side = nodes_per_side();
  if (dim_ == 1) return Vector{static_cast<double>(node) * h_};
  return Vector{static_cast<double>(node % side) * h_, static_cast<double>(node / side) * h_};
}

Vector Grid::cell_center(std::size_t cell) const {
  if (dim_ == 1) return Vector{(static_cast<double>(cell) + 0.5) * h_};
  const std::size_t i = cell % cells_, j = cell / cells_;
  return Vector{(static_cast<double>(i) + 0.5) * h_, (static_cast<double>(j) + 0.5) * h_};
}

std::size_t Grid::cell_corner(std::size_t cell, int corner) const {
  if (dim_ == 1) return cell + static_cast<std::size_t>(corner);
  const std::size_t side = nodes_per_side();
  const std::size_t i = cell % cells_, j = cell / cells_;
  return (i + (corner & 1)) + (j + ((corner >> 1) & 1)) * side;
}

double Grid::corner_weight(int corner, int dir) const {
  if (dim_ == 1) return stencil_factor_ * (corner == 0 ? -1.0 : 1.0) / h_;
  const int bit = (corner >> dir) & 1;
  return stencil_factor_ * (bit ? 0.5 : -0.5) / h_;
}

NodalField Grid::reference_positions() const {
  return sample([](const Vector& x) { return x; });
}

std::vector<Matrix> gradient_field(const Grid& grid, std::span<const double> nodal) {
  const int n = grid.dim();
  if (nodal.size() != grid.num_nodes() * n) throw DimensionMismatch("nodal field does not match grid");
  std::vector<Matrix> out(grid.num_cells(), Matrix(n));
  for (std::size_t cell = 0; cell < grid.num_cells(); ++cell) {
    Matrix& f = out[cell];
    for (int corner = 0; corner < grid.corners_per_cell(); ++corner) {
      const std::size_t node = grid.cell_corner(cell, corner);
      for (int dir = 0; dir < n; ++dir) {
        const double w = grid.corner_weight(corner, dir);
        for (int c = 0; c < n; ++c) f(c, dir) += w * nodal[node * n + c];
      }
    }
  }
  return out;
}

NodalField stress_divergence(const Grid& grid, std::span<const Matrix> cell_stress) {
  const int n = grid.dim();
  if (cell_stress.size() != grid.num_cells()) throw DimensionMismatch("cell field does not match grid");
  NodalField out(grid.num_nodes() * n, 0.0);
  for (std::size_t cell = 0; cell < grid.num_cells(); ++cell) {
    const Matrix& p = cell_stress[cell];
    for (int corner = 0; corner < grid.corners_per_cell(); ++corner) {
      const std::size_t node = grid.cell_corner(cell, corner);
      if (grid.is_boundary(node)) continue;
      for (int dir = 0; dir < n; ++dir) {
        const double w = grid.corner_weight(corner, dir);
        for (int c = 0; c < n; ++c) out[node * n + c] -= w * p(c, dir);
      }
    }
  }
  return out;
}

double nodal_inner(const Grid& grid, std::span<const double> u, std::span<const double> w) {
  double s = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) s += u[k] * w[k];
  return s * grid.cell_volume();
}

double cell_inner(const Grid& grid, std::span<const Matrix> p, std::span<const Matrix> g) {
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) s += frob(p[k], g[k]);
  return s * grid.cell_volume();
}

double min_cell_det(const Grid& grid, std::span<const double> xi) {
  double m = std::numeric_limits<double>::infinity();
  for (const Matrix& f : gradient_field(grid, xi)) {
    const double d = det(f);
    if (!std::isfinite(d)) return -std::numeric_limits<double>::infinity();
    m = std::min(m, d);
  }
  return m;
}

ViscousOperator::ViscousOperator(const Grid& grid, Eigen::SparseMatrix<double> matrix, bool symmetric)
    : grid_(grid), matrix_(std::move(matrix)), symmetric_(symmetric) {}

NodalField ViscousOperator::apply(std::span<const double> w) const {
  NodalField out(w.size(), 0.0);
  const Eigen::VectorXd y = matrix_ * gather_interior(grid_, w);
  scatter_interior(grid_, y, out);
  return out;
}

ViscousOperator assemble_viscous_operator(const Grid& grid, std::span<const FourthOrderTensor> frozen) {
  const int n = grid.dim();
  if (frozen.size() != grid.num_cells()) throw DimensionMismatch("need one frozen tensor per cell");
  const int corners = grid.corners_per_cell();
  const int local = corners * n;
  const int n2 = n * n;

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(grid.num_cells() * static_cast<std::size_t>(local * local));
  bool symmetric = true;

  // local gradient matrix: rows (c, dir) flattened as c * n + dir, columns (corner, c)
  Eigen::MatrixXd g_local = Eigen::MatrixXd::Zero(n2, local);
  for (int corner = 0; corner < corners; ++corner)
    for (int c = 0; c < n; ++c)
      for (int dir = 0; dir < n; ++dir) g_local(c * n + dir, corner * n + c) = grid.corner_weight(corner, dir);

  std::vector<long> dof(local);
  for (std::size_t cell = 0; cell < grid.num_cells(); ++cell) {
    const FourthOrderTensor& m = frozen[cell];
    symmetric = symmetric && m.is_symmetric(1e-12);
    Eigen::MatrixXd m_local(n2, n2);
    for (int r = 0; r < n2; ++r)
      for (int c = 0; c < n2; ++c) m_local(r, c) = m(r, c);
    const Eigen::MatrixXd k_local = grid.cell_volume() * (g_local.transpose() * m_local * g_local);

    for (int corner = 0; corner < corners; ++corner) {
      const long idx = grid.interior_index(grid.cell_corner(cell, corner));
      for (int c = 0; c < n; ++c) dof[corner * n + c] = idx < 0 ? -1 : idx * n + c;
    }
    for (int a = 0; a < local; ++a) {
      if (dof[a] < 0) continue;
      for (int b = 0; b < local; ++b) {
        if (dof[b] < 0 || k_local(a, b) == 0.0) continue;
        triplets.emplace_back(dof[a], dof[b], k_local(a, b));
      }
    }
  }

  // nodal mass is h^n on every interior node; divide it out so L w = -div(M grad w)
  const auto dofs = static_cast<Eigen::Index>(grid.num_interior_dofs());
  Eigen::SparseMatrix<double> mat(dofs, dofs);
  mat.setFromTriplets(triplets.begin(), triplets.end());
  mat /= grid.cell_volume();
  mat.makeCompressed();
  return ViscousOperator(grid, std::move(mat), symmetric);
}

Eigen::VectorXd gather_interior(const Grid& grid, std::span<const double> nodal) {
  const int n = grid.dim();
  Eigen::VectorXd out(static_cast<Eigen::Index>(grid.num_interior_dofs()));
  const auto& interior = grid.interior_nodes();
  for (std::size_t k = 0; k < interior.size(); ++k)
    for (int c = 0; c < n; ++c) out(static_cast<Eigen::Index>(k * n + c)) = nodal[interior[k] * n + c];
  return out;
}

void scatter_interior(const Grid& grid, const Eigen::VectorXd& dofs, NodalField& nodal) {
  const int n = grid.dim();
  const auto& interior = grid.interior_nodes();
  for (std::size_t k = 0; k < interior.size(); ++k)
    for (int c = 0; c < n; ++c) nodal[interior[k] * n + c] = dofs(static_cast<Eigen::Index>(k * n + c));
}

}  // namespace visco
