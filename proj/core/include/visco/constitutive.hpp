#pragma once

/**
 * @file constitutive.hpp
 *
 * @brief Elastic energy densities W, viscous stress tensors Z(F, Q) and their tangents.
 *
 * Energies:
 *   W0(F) = |F^T F - Id|^2
 *   W1(F) = |(F^T F)^{1/2} - Id|^2 + |log det F|^q
 *   W2(F) = |(F^T F)^{1/2} - Id|^2 + |1/det F - 1|^q
 * W1 and W2 are +infinity for det F <= 0.
 *
 * Viscous stresses, with F the deformation gradient and Q the velocity gradient:
 *   Zm(F, Q)  = [sym(Q F^{-1})]^{2m+1} F^{-T}
 *   Z0'(F, Q) = 2 (det F) sym(Q F^{-1}) F^{-T}
 *   Z0''(F, Q) = 2 F sym(F^T Q)
 */

#include <cstdint>
#include <limits>
#include <string>

#include "visco/tensor.hpp"

namespace visco {

inline constexpr double kInfiniteEnergy = std::numeric_limits<double>::infinity();

struct EnergyModel {
  enum class Kind { W0, W1, W2 };
  Kind kind = Kind::W0;
  double q = 2.0;  // exponent of the volumetric term, W1/W2 only

  static EnergyModel w0() { return {Kind::W0, 2.0}; }
  static EnergyModel w1(double q) { return {Kind::W1, q}; }
  static EnergyModel w2(double q) { return {Kind::W2, q}; }

  /// Throws DomainError unless q > 1 for W1/W2.
  void validate() const;
  std::string name() const;
  bool operator==(const EnergyModel&) const = default;
};

struct ViscosityModel {
  enum class Kind { Zm, Z0Prime, Z0DoublePrime };
  Kind kind = Kind::Z0DoublePrime;
  int m = 0;  // Zm only

  static ViscosityModel zm(int m) { return {Kind::Zm, m}; }
  static ViscosityModel z0_prime() { return {Kind::Z0Prime, 0}; }
  static ViscosityModel z0_double_prime() { return {Kind::Z0DoublePrime, 0}; }

  void validate() const;
  /// True when Z is linear in Q (Z0', Z0'' and Zm with m = 0).
  bool linear_in_q() const { return kind != Kind::Zm || m == 0; }
  std::string name() const;
  bool operator==(const ViscosityModel&) const = default;
};

struct ConstitutiveModel {
  EnergyModel energy;
  ViscosityModel viscosity;

  void validate() const {
    energy.validate();
    viscosity.validate();
  }
  bool operator==(const ConstitutiveModel&) const = default;
};

/// W(F); returns kInfiniteEnergy for W1/W2 when det F <= 0.
double energy(const EnergyModel& model, const Matrix& f);

/// DW(F). Closed form for W0; sixth-order central differences of energy() for W1/W2.
/// Throws DomainError when det F <= 0 for W1/W2.
Matrix piola_stress(const EnergyModel& model, const Matrix& f);

/// Z(F, Q). Throws SingularMatrix when F cannot be inverted.
Matrix viscous_stress(const ViscosityModel& model, const Matrix& f, const Matrix& q);

/// The linear map Q -> D_Q Z(F0, Q0)[Q].
FourthOrderTensor viscous_tangent_q(const ViscosityModel& model, const Matrix& f0, const Matrix& q0);

/// Z(F, Q) : Q.
double dissipation_density(const ViscosityModel& model, const Matrix& f, const Matrix& q);

struct AxiomReport {
  int samples_tested = 0;
  double max_frame_invariance_residual_w = 0.0;
  double max_frame_invariance_residual_z = 0.0;
  double max_angular_momentum_residual = 0.0;
  double min_dissipation = 0.0;
  bool pass = false;
};

/// Randomized check of frame invariance of W and Z, balance of angular momentum
/// (F^{-1} Z symmetric) and nonnegative dissipation. Residuals are scaled by max(1, |reference|).
AxiomReport validate_axioms(const ConstitutiveModel& model, int dim, int num_samples, std::uint64_t seed,
                            double tol = 1e-9);

/// F = R1 diag(d) R2 with d in [0.5, 2]^n; det F > 0.
Matrix random_deformation_gradient(int dim, std::uint64_t seed);

}  // namespace visco
