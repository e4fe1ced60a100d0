#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

#include "oracles.hpp"
#include "visco/errors.hpp"
#include "visco/grid.hpp"
#include "visco/wellposedness.hpp"

using namespace visco;

namespace {

NodalField random_clamped(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  NodalField w(g.num_nodes() * g.dim(), 0.0);
  for (std::size_t node : g.interior_nodes())
    for (int c = 0; c < g.dim(); ++c) w[node * g.dim() + c] = u(rng);
  return w;
}

std::vector<Matrix> random_cell_field(const Grid& g, std::mt19937_64& rng) {
  std::vector<Matrix> p(g.num_cells());
  for (Matrix& m : p) m = oracle::random_matrix(g.dim(), rng);
  return p;
}

}  // namespace

TEST(Grid, NodeAndBoundaryCounts) {
  const Grid g1 = Grid::build(1, 4);
  EXPECT_EQ(g1.num_nodes(), 5u);
  EXPECT_EQ(g1.boundary_nodes(), (std::vector<std::size_t>{0, 4}));
  const Grid g2 = Grid::build(2, 4);
  EXPECT_EQ(g2.num_nodes(), 25u);
  EXPECT_EQ(g2.boundary_nodes().size(), 16u);
  EXPECT_EQ(g2.num_interior_dofs(), 18u);
  EXPECT_DOUBLE_EQ(g2.spacing(), 0.25);
  EXPECT_THROW(Grid::build(2, 3), InvalidConfig);
  EXPECT_THROW(Grid::build(3, 8), InvalidConfig);
}

TEST(Gradient, ExactForAffineFields) {
  std::mt19937_64 rng(71);
  for (int n = 1; n <= 2; ++n) {
    const Grid g = Grid::build(n, 6);
    const Matrix a = oracle::random_matrix(n, rng);
    const Vector c = oracle::random_unit(n, rng);
    const auto f = gradient_field(g, g.sample([&](const Vector& x) { return a * x + c; }));
    for (const Matrix& fc : f)
      for (int k = 0; k < a.size(); ++k) EXPECT_NEAR(fc.flat(k), a.flat(k), 1e-13);
  }
  for (const Matrix& fc : gradient_field(Grid::build(2, 5), Grid::build(2, 5).reference_positions()))
    EXPECT_LE(norm(fc - Matrix::identity(2)), 1e-14);
}

TEST(Gradient, SecondOrderAtCellCentres) {
  for (int cells : {16, 32}) {
    const Grid g = Grid::build(1, cells);
    const auto f = gradient_field(g, g.sample([](const Vector& x) { return Vector{x[0] * x[0]}; }));
    for (std::size_t c = 0; c < g.num_cells(); ++c)
      EXPECT_NEAR(f[c](0, 0), 2.0 * g.cell_center(c)[0], 1e-12);  // exact for quadratics at the midpoint
  }
  const Grid g = Grid::build(1, 32);
  const auto f = gradient_field(g, g.sample([](const Vector& x) { return Vector{x[0] * x[0] * x[0]}; }));
  for (std::size_t c = 0; c < g.num_cells(); ++c) {
    const double xc = g.cell_center(c)[0];
    EXPECT_NEAR(f[c](0, 0), 3.0 * xc * xc, 0.25 * g.spacing() * g.spacing() + 1e-12);
  }
}

TEST(StressDivergence, ConstantStressHasNoDivergence) {
  for (int n = 1; n <= 2; ++n) {
    const Grid g = Grid::build(n, 7);
    const Matrix c = n == 1 ? Matrix{{1.5}} : Matrix{{1.5, -0.2}, {0.3, 2.0}};
    const std::vector<Matrix> p(g.num_cells(), c);
    for (double v : stress_divergence(g, p)) EXPECT_NEAR(v, 0.0, 1e-12);
  }
}

TEST(StressDivergence, LinearStressIn1D) {
  const Grid g = Grid::build(1, 10);
  std::vector<Matrix> p(g.num_cells());
  for (std::size_t c = 0; c < g.num_cells(); ++c) p[c] = Matrix{{g.cell_center(c)[0]}};
  const NodalField d = stress_divergence(g, p);
  for (std::size_t node : g.interior_nodes()) EXPECT_NEAR(d[node], 1.0, 1e-12);
  for (std::size_t node : g.boundary_nodes()) EXPECT_EQ(d[node], 0.0);
}

TEST(StressDivergence, SummationByParts) {
  std::mt19937_64 rng(73);
  for (int n = 1; n <= 2; ++n) {
    const Grid g = Grid::build(n, 9);
    for (int trial = 0; trial < 20; ++trial) {
      const auto p = random_cell_field(g, rng);
      const NodalField w = random_clamped(g, rng);
      const double lhs = nodal_inner(g, stress_divergence(g, p), w);
      const double rhs = -cell_inner(g, p, gradient_field(g, w));
      EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST(ViscousOperator, IdentityMapIsLaplacianAnnihilatingAffineFields) {
  const Grid g = Grid::build(2, 6);
  const std::vector<FourthOrderTensor> id(g.num_cells(), FourthOrderTensor::identity(2));
  const ViscousOperator lap = assemble_viscous_operator(g, id);
  EXPECT_TRUE(lap.symmetric());
  std::vector<Matrix> flux = gradient_field(g, g.reference_positions());
  for (double v : stress_divergence(g, flux)) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(ViscousOperator, MatchesHandAssembledStencilIn1D) {
  const Grid g = Grid::build(1, 4);
  const std::vector<FourthOrderTensor> m(g.num_cells(), 2.0 * FourthOrderTensor::symmetrizer(1));
  const Eigen::MatrixXd a(assemble_viscous_operator(g, m).matrix());
  const double h2 = g.spacing() * g.spacing();
  Eigen::MatrixXd ref(3, 3);
  ref << 4.0, -2.0, 0.0, -2.0, 4.0, -2.0, 0.0, -2.0, 4.0;
  ref /= h2;
  EXPECT_LT((a - ref).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ViscousOperator, ApplyEqualsNegativeDivergenceOfFlux) {
  std::mt19937_64 rng(79);
  const Grid g = Grid::build(2, 5);
  std::vector<FourthOrderTensor> m(g.num_cells());
  for (auto& t : m)
    t = viscous_tangent_q(ViscosityModel::zm(1), random_deformation_gradient(2, rng()), oracle::random_matrix(2, rng));
  const ViscousOperator op = assemble_viscous_operator(g, m);
  EXPECT_TRUE(op.symmetric());  // D_Q Zm is the Hessian of a potential in Q
  const NodalField w = random_clamped(g, rng);
  const auto grad = gradient_field(g, w);
  std::vector<Matrix> flux(g.num_cells());
  for (std::size_t c = 0; c < flux.size(); ++c) flux[c] = m[c].apply(grad[c]);
  const NodalField ref = stress_divergence(g, flux);
  const NodalField got = op.apply(w);
  for (std::size_t k = 0; k < ref.size(); ++k) EXPECT_NEAR(got[k], -ref[k], 1e-10);
}

// <L w, w> >= (1/gamma - c h) ||grad w||^2 with c = 1
TEST(ViscousOperator, DiscreteKornCoercivity) {
  std::mt19937_64 rng(83);
  for (int cells : {8, 16}) {
    const Grid g = Grid::build(2, cells);
    for (int trial = 0; trial < 5; ++trial) {
      const Matrix f0 = random_deformation_gradient(2, rng());
      const auto t = viscous_tangent_q(ViscosityModel::z0_double_prime(), f0, Matrix(2));
      const double gamma = rank_one_min(t).gamma_est;
      const ViscousOperator op = assemble_viscous_operator(g, std::vector<FourthOrderTensor>(g.num_cells(), t));
      for (int s = 0; s < 10; ++s) {
        const NodalField w = random_clamped(g, rng);
        const auto grad = gradient_field(g, w);
        const double lww = nodal_inner(g, op.apply(w), w);
        const double gg = cell_inner(g, grad, grad);
        EXPECT_GE(lww, (1.0 / gamma - g.spacing()) * gg);
      }
    }
  }
}

TEST(Grid, StencilDefectScalesGradient) {
  const Grid g = Grid::build(1, 8).with_stencil_defect(1.1);
  for (const Matrix& f : gradient_field(g, g.reference_positions())) EXPECT_NEAR(f(0, 0), 1.1, 1e-14);
}

TEST(MinCellDet, RestIsOne) {
  const Grid g = Grid::build(2, 8);
  EXPECT_DOUBLE_EQ(min_cell_det(g, g.reference_positions()), 1.0);
}
