#pragma once

/**
 * @file wellposedness.hpp
 *
 * @brief Numerical checks of the Korn-type coercivity condition
 *
 *     |a|^2 |b|^2 <= gamma <M(a (x) b) : a (x) b>   for all a, b
 *
 * for a frozen viscous tangent M = D_Q Z(F0, Q0), together with the acoustic-tensor
 * spectrum M_k(a) = M(a (x) k) k and a Fourier-side sampler on periodic trigonometric fields.
 */

#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "visco/constitutive.hpp"
#include "visco/tensor.hpp"

namespace visco {

inline constexpr double kDegenerateQThreshold = 1e-12;

struct RankOneResult {
  double ratio_min = 0.0;
  double gamma_est = std::numeric_limits<double>::infinity();  // 1 / ratio_min, +inf when ratio_min <= 0
  Vector a_star;
  Vector b_star;
  int samples = 0;
};

/// <M(a (x) b) : a (x) b> / (|a|^2 |b|^2)
double rank_one_ratio(const FourthOrderTensor& m, const Vector& a, const Vector& b);

/// Minimizes the rank-one ratio over unit a, b. The direction b is scanned on an angular grid
/// (`angular_resolution` points per sphere coordinate) and refined by `refine_iters` golden-section
/// steps; for each b the minimum over a is the smallest eigenvalue of the symmetric n x n matrix
/// sym(sum_{jl} M_{ij,kl} b_j b_l), taken exactly.
RankOneResult rank_one_min(const FourthOrderTensor& m, int angular_resolution = 360, int refine_iters = 60);

/// Closed-form Korn constants of the viscous tangents:
///   Z0''      : |F0^{-T}|^2
///   Z0'       : |F0|^2 / det F0
///   Zm, m = 0 : |F0|^2 / 2
///   Zm, m = 1 : 2 |F0|^2 |sym(Q0 F0^{-1})^{-1}|^2
///   Zm, m = 2 : 2 |F0|^2 |sym(Q0 F0^{-1})^{-1}|^4
/// Throws DomainError (det F0 <= 0), DegenerateQ (|det sym(Q0 F0^{-1})| <= 1e-12 for m >= 1)
/// or Unsupported (m >= 3).
double closed_form_gamma(const ViscosityModel& model, const Matrix& f0, const Matrix& q0);

/// Eigenvalues of a -> M(a (x) k) k, sorted by real part then imaginary part.
std::vector<std::complex<double>> acoustic_spectrum(const FourthOrderTensor& m, const Vector& k);

/// The n x n acoustic matrix for direction k.
Matrix acoustic_matrix(const FourthOrderTensor& m, const Vector& k);

/// Eigenvalues of a real n x n matrix, sorted by real part then imaginary part.
std::vector<std::complex<double>> eigenvalues(const Matrix& a);

struct SpectrumReport {
  double min_real_part = 0.0;
  double max_abs_arg = 0.0;  // radians
  int directions_scanned = 0;
  bool elliptic = false;
};

/// Quasi-uniform unit directions: uniform angles in 2D, a Fibonacci lattice in 3D, {+1, -1} in 1D.
std::vector<Vector> unit_directions(int dim, int count);

SpectrumReport sector_scan(const FourthOrderTensor& m, int num_directions);

/// Real trigonometric vector field on the unit torus:
///   zeta(x) = sum_j cos_coef_j cos(2 pi k_j . x) + sin_coef_j sin(2 pi k_j . x).
struct TrigField {
  std::vector<std::vector<int>> modes;  // integer wave vectors, no two equal up to sign
  std::vector<Vector> cos_coef;
  std::vector<Vector> sin_coef;
};

/// int <M grad zeta : grad zeta> / int |grad zeta|^2 by exact Parseval summation.
double trig_field_ratio(const FourthOrderTensor& m, const TrigField& field);

/// Minimum of trig_field_ratio over `num_fields` random fields with |k|_inf <= max_modes.
double fourier_korn_sample(const FourthOrderTensor& m, int num_fields, int max_modes, std::uint64_t seed);

struct UniformGammaReport {
  double gamma_sup = 0.0;
  double gamma_inf = 0.0;
  std::size_t worst_node = 0;
  bool pass = false;
};

/// Per-node rank-one gamma of M_X = D_Q Z(F0(X), Q0(X)); pass when the supremum is finite.
/// Throws DomainError / SingularMatrix naming the offending node.
UniformGammaReport check_initial_data(const ViscosityModel& model, std::span<const Matrix> f0,
                                      std::span<const Matrix> q0, int resolution = 360);

}  // namespace visco
