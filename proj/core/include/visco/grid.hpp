#pragma once

/**
 * @file grid.hpp
 *
 * @brief Structured grid on [0,1]^n (n = 1, 2) and the discrete gradient / divergence pair.
 *
 * Nodal vector fields are stored node-major: component c of node k lives at k * dim + c.
 * Gradients live on cells (one n x n matrix per cell, row = component, column = direction)
 * and are formed from averaged corner differences, which is exact for affine fields.
 * stress_divergence is the negative adjoint of gradient_field for the inner products
 * sum_nodes h^n u.w and sum_cells h^n P:G, so the pair satisfies summation by parts.
 */

#include <Eigen/Sparse>

#include <cstddef>
#include <span>
#include <vector>

#include "visco/tensor.hpp"

namespace visco {

using NodalField = std::vector<double>;

class Grid {
 public:
  /// Throws InvalidConfig unless dim in {1,2} and cells >= 4.
  static Grid build(int dim, int cells);

  int dim() const noexcept { return dim_; }
  int cells_per_side() const noexcept { return cells_; }
  double spacing() const noexcept { return h_; }
  double cell_volume() const noexcept { return dim_ == 1 ? h_ : h_ * h_; }
  int nodes_per_side() const noexcept { return cells_ + 1; }
  std::size_t num_nodes() const noexcept { return num_nodes_; }
  std::size_t num_cells() const noexcept { return num_cells_; }
  int corners_per_cell() const noexcept { return dim_ == 1 ? 2 : 4; }

  Vector node_coord(std::size_t node) const;
  Vector cell_center(std::size_t cell) const;
  bool is_boundary(std::size_t node) const { return interior_index_[node] < 0; }
  const std::vector<std::size_t>& boundary_nodes() const noexcept { return boundary_; }
  std::size_t num_interior() const noexcept { return interior_.size(); }
  const std::vector<std::size_t>& interior_nodes() const noexcept { return interior_; }
  /// Position of `node` in interior_nodes(), or -1 for boundary nodes.
  long interior_index(std::size_t node) const { return interior_index_[node]; }
  std::size_t num_interior_dofs() const noexcept { return interior_.size() * static_cast<std::size_t>(dim_); }

  /// Corner node of `cell`; corner bits (bx, by) select the +h neighbours.
  std::size_t cell_corner(std::size_t cell, int corner) const;
  /// d(phi_corner)/dX_dir for the averaged-difference stencil, scaled by the stencil factor.
  double corner_weight(int corner, int dir) const;

  /// Copy of this grid whose gradient stencil is scaled by `factor`.
  /// Only used as a deliberately inconsistent fixture in convergence tests.
  Grid with_stencil_defect(double factor) const;
  double stencil_factor() const noexcept { return stencil_factor_; }

  /// Samples a vector-valued function at every node.
  template <typename Fn>
  NodalField sample(Fn&& fn) const {
    NodalField out(num_nodes_ * dim_);
    for (std::size_t k = 0; k < num_nodes_; ++k) {
      const Vector value = fn(node_coord(k));
      for (int c = 0; c < dim_; ++c) out[k * dim_ + c] = value[c];
    }
    return out;
  }

  /// The identity deformation X -> X.
  NodalField reference_positions() const;

 private:
  Grid() = default;

  int dim_ = 0;
  int cells_ = 0;
  double h_ = 0.0;
  double stencil_factor_ = 1.0;
  std::size_t num_nodes_ = 0;
  std::size_t num_cells_ = 0;
  std::vector<std::size_t> boundary_;
  std::vector<std::size_t> interior_;
  std::vector<long> interior_index_;
};

std::vector<Matrix> gradient_field(const Grid& grid, std::span<const double> nodal);

/// -G^T P, with boundary rows zeroed.
NodalField stress_divergence(const Grid& grid, std::span<const Matrix> cell_stress);

/// Discrete L2 inner products with weight h^n.
double nodal_inner(const Grid& grid, std::span<const double> u, std::span<const double> w);
double cell_inner(const Grid& grid, std::span<const Matrix> p, std::span<const Matrix> g);

/// min over cells of det(grad xi).
double min_cell_det(const Grid& grid, std::span<const double> xi);

/// w -> -div(M grad w) on interior degrees of freedom (boundary clamped to zero).
class ViscousOperator {
 public:
  ViscousOperator(const Grid& grid, Eigen::SparseMatrix<double> matrix, bool symmetric);

  const Eigen::SparseMatrix<double>& matrix() const noexcept { return matrix_; }
  bool symmetric() const noexcept { return symmetric_; }
  /// Applies the operator to a full nodal field; boundary values of `w` are ignored.
  NodalField apply(std::span<const double> w) const;

 private:
  Grid grid_;
  Eigen::SparseMatrix<double> matrix_;
  bool symmetric_;
};

ViscousOperator assemble_viscous_operator(const Grid& grid, std::span<const FourthOrderTensor> frozen);

/// Interior degrees of freedom of a nodal field, in interior_nodes() order.
Eigen::VectorXd gather_interior(const Grid& grid, std::span<const double> nodal);
/// Writes interior values into `nodal`, leaving boundary entries untouched.
void scatter_interior(const Grid& grid, const Eigen::VectorXd& dofs, NodalField& nodal);

}  // namespace visco
