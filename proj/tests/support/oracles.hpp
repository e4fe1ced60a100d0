#pragma once

// Independent reference computations used by the unit and acceptance tests. Nothing here calls
// the closed-form tangents or the minimizers under test.

#include <cmath>
#include <numbers>
#include <random>

#include "visco/constitutive.hpp"
#include "visco/tensor.hpp"

namespace oracle {

using visco::FourthOrderTensor;
using visco::Matrix;
using visco::Vector;

inline Matrix random_matrix(int dim, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix a(dim);
  for (int k = 0; k < dim * dim; ++k) a.flat(k) = u(rng);
  return a;
}

inline Vector random_unit(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(dim);
  double s = 0.0;
  do {
    s = 0.0;
    for (int i = 0; i < dim; ++i) {
      v[i] = g(rng);
      s += v[i] * v[i];
    }
  } while (s < 1e-12);
  return (1.0 / std::sqrt(s)) * v;
}

/// Central difference of Q -> Z(F, Q) along each matrix unit.
inline FourthOrderTensor fd_tangent(const visco::ViscosityModel& model, const Matrix& f, const Matrix& q,
                                    double h = 1e-5) {
  const int n = f.dim();
  FourthOrderTensor t(n);
  for (int col = 0; col < n * n; ++col) {
    Matrix qp = q, qm = q;
    qp.flat(col) += h;
    qm.flat(col) -= h;
    const Matrix d = (1.0 / (2.0 * h)) * (visco::viscous_stress(model, f, qp) - visco::viscous_stress(model, f, qm));
    for (int row = 0; row < n * n; ++row) t(row, col) = d.flat(row);
  }
  return t;
}

inline Matrix fd_energy_gradient(const visco::EnergyModel& model, const Matrix& f, double h = 1e-5) {
  const int n = f.dim();
  Matrix g(n);
  for (int k = 0; k < n * n; ++k) {
    Matrix fp = f, fm = f;
    fp.flat(k) += h;
    fm.flat(k) -= h;
    g.flat(k) = (visco::energy(model, fp) - visco::energy(model, fm)) / (2.0 * h);
  }
  return g;
}

inline double max_abs(const FourthOrderTensor& t) {
  double m = 0.0;
  for (int r = 0; r < t.rows(); ++r)
    for (int c = 0; c < t.rows(); ++c) m = std::max(m, std::abs(t(r, c)));
  return m;
}

inline double max_abs_diff(const FourthOrderTensor& a, const FourthOrderTensor& b) {
  double m = 0.0;
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.rows(); ++c) m = std::max(m, std::abs(a(r, c) - b(r, c)));
  return m;
}

/// <M(a (x) b) : a (x) b> / (|a|^2 |b|^2), written out with explicit index sums.
inline double ratio(const FourthOrderTensor& m, const Vector& a, const Vector& b) {
  const int n = m.dim();
  double num = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) num += m.at(i, j, k, l) * a[k] * b[l] * a[i] * b[j];
  double aa = 0.0, bb = 0.0;
  for (int i = 0; i < n; ++i) {
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return num / (aa * bb);
}

/// Dense scan over both unit vectors in 2D: `steps` angles for a and for b on [0, pi).
inline double dense_scan_min_2d(const FourthOrderTensor& m, int steps = 3600) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < steps; ++i) {
    const double ta = std::numbers::pi * i / steps;
    const Vector a{std::cos(ta), std::sin(ta)};
    for (int j = 0; j < steps; ++j) {
      const double tb = std::numbers::pi * j / steps;
      best = std::min(best, ratio(m, a, Vector{std::cos(tb), std::sin(tb)}));
    }
  }
  return best;
}

/// Random sampling of both unit vectors (any dimension); an upper bound on the true minimum.
inline double sampled_min(const FourthOrderTensor& m, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) best = std::min(best, ratio(m, random_unit(m.dim(), rng), random_unit(m.dim(), rng)));
  return best;
}

}  // namespace oracle
