#include "visco/constitutive.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace visco {

void EnergyModel::validate() const {
  if ((kind == Kind::W1 || kind == Kind::W2) && !(q > 1.0))
    throw DomainError("energy exponent q must exceed 1, got " + std::to_string(q));
}

std::string EnergyModel::name() const {
  switch (kind) {
    case Kind::W0: return "W0";
    case Kind::W1: return "W1";
    case Kind::W2: return "W2";
  }
  return "?";
}

void ViscosityModel::validate() const {
  if (kind == Kind::Zm && m < 0) throw DomainError("viscosity exponent m must be nonnegative");
}

std::string ViscosityModel::name() const {
  switch (kind) {
    case Kind::Zm: return "Zm(m=" + std::to_string(m) + ")";
    case Kind::Z0Prime: return "Z0prime";
    case Kind::Z0DoublePrime: return "Z0doubleprime";
  }
  return "?";
}

namespace {

double stretch_term(const Matrix& f) {
  const Matrix u = sqrt_spd(transpose(f) * f);
  return frob(u - Matrix::identity(f.dim()), u - Matrix::identity(f.dim()));
}

}  // namespace

double energy(const EnergyModel& model, const Matrix& f) {
  const int n = f.dim();
  if (model.kind == EnergyModel::Kind::W0) {
    const Matrix c = transpose(f) * f - Matrix::identity(n);
    return frob(c, c);
  }
  const double j = det(f);
  if (!(j > 0.0)) return kInfiniteEnergy;
  const double volumetric =
      model.kind == EnergyModel::Kind::W1 ? std::abs(std::log(j)) : std::abs(1.0 / j - 1.0);
  return stretch_term(f) + std::pow(volumetric, model.q);
}

Matrix piola_stress(const EnergyModel& model, const Matrix& f) {
  const int n = f.dim();
  if (model.kind == EnergyModel::Kind::W0) return 4.0 * (f * (transpose(f) * f - Matrix::identity(n)));

  if (!(det(f) > 0.0)) throw DomainError("DW undefined for det F <= 0");
  constexpr double h = 1e-4;
  // sixth-order central difference weights for offsets 1, 2, 3
  constexpr double w1 = 45.0 / 60.0, w2 = -9.0 / 60.0, w3 = 1.0 / 60.0;
  Matrix out(n);
  for (int k = 0; k < f.size(); ++k) {
    auto shifted = [&](double s) {
      Matrix g = f;
      g.flat(k) += s * h;
      return energy(model, g);
    };
    const double d = w1 * (shifted(1) - shifted(-1)) + w2 * (shifted(2) - shifted(-2)) + w3 * (shifted(3) - shifted(-3));
    out.flat(k) = d / h;
  }
  if (!out.is_finite()) throw DomainError("finite-difference stencil crossed det F <= 0");
  return out;
}

Matrix viscous_stress(const ViscosityModel& model, const Matrix& f, const Matrix& q) {
  switch (model.kind) {
    case ViscosityModel::Kind::Z0DoublePrime: return 2.0 * (f * sym(transpose(f) * q));
    case ViscosityModel::Kind::Z0Prime: {
      const auto [j, finv] = det_inv(f);
      return (2.0 * j) * (sym(q * finv) * transpose(finv));
    }
    case ViscosityModel::Kind::Zm: {
      const Matrix finv = inverse(f);
      return power(sym(q * finv), 2 * model.m + 1) * transpose(finv);
    }
  }
  throw Unsupported("unknown viscosity model");
}

FourthOrderTensor viscous_tangent_q(const ViscosityModel& model, const Matrix& f0, const Matrix& q0) {
  const int n = f0.dim();
  switch (model.kind) {
    case ViscosityModel::Kind::Z0DoublePrime: {
      const Matrix ft = transpose(f0);
      return FourthOrderTensor::from_map(n, [&](const Matrix& q) { return 2.0 * (f0 * sym(ft * q)); });
    }
    case ViscosityModel::Kind::Z0Prime: {
      const auto [j, finv] = det_inv(f0);
      const Matrix finv_t = transpose(finv);
      return FourthOrderTensor::from_map(n, [&](const Matrix& q) { return (2.0 * j) * (sym(q * finv) * finv_t); });
    }
    case ViscosityModel::Kind::Zm: {
      const Matrix finv = inverse(f0);
      const Matrix finv_t = transpose(finv);
      const Matrix a = sym(q0 * finv);
      const int top = 2 * model.m;
      std::vector<Matrix> powers;
      powers.reserve(top + 1);
      powers.push_back(Matrix::identity(n));
      for (int j = 1; j <= top; ++j) powers.push_back(powers.back() * a);
      return FourthOrderTensor::from_map(n, [&](const Matrix& q) {
        const Matrix b = sym(q * finv);
        Matrix s(n);
        for (int j = 0; j <= top; ++j) s += powers[j] * b * powers[top - j];
        return s * finv_t;
      });
    }
  }
  throw Unsupported("unknown viscosity model");
}

double dissipation_density(const ViscosityModel& model, const Matrix& f, const Matrix& q) {
  return frob(viscous_stress(model, f, q), q);
}

Matrix random_deformation_gradient(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> stretch(0.5, 2.0);
  Vector d(dim);
  for (int i = 0; i < dim; ++i) d[i] = stretch(rng);
  const Matrix r1 = random_rotation(dim, rng());
  const Matrix r2 = random_rotation(dim, rng());
  return r1 * Matrix::diagonal(d) * r2;
}

namespace {

Matrix random_matrix(int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(dim);
  for (int k = 0; k < m.size(); ++k) m.flat(k) = u(rng);
  return m;
}

double scaled(double residual, double reference) { return residual / std::max(1.0, std::abs(reference)); }

}  // namespace

AxiomReport validate_axioms(const ConstitutiveModel& model, int dim, int num_samples, std::uint64_t seed,
                            double tol) {
  model.validate();
  AxiomReport report;
  if (num_samples < 1) return report;

  std::mt19937_64 rng(seed);
  report.min_dissipation = std::numeric_limits<double>::infinity();
  for (int s = 0; s < num_samples; ++s) {
    const Matrix f = random_deformation_gradient(dim, rng());
    const Matrix q = random_matrix(dim, rng);
    const Matrix r = random_rotation(dim, rng());
    const Matrix k = skew(random_matrix(dim, rng));

    const double w = energy(model.energy, f);
    const double w_rot = energy(model.energy, r * f);
    report.max_frame_invariance_residual_w =
        std::max(report.max_frame_invariance_residual_w, scaled(std::abs(w_rot - w), w));

    const Matrix z = viscous_stress(model.viscosity, f, q);
    const Matrix s_part = inverse(f) * z;
    report.max_angular_momentum_residual =
        std::max(report.max_angular_momentum_residual, scaled(norm(skew(s_part)), norm(s_part)));

    const Matrix z_rot = viscous_stress(model.viscosity, r * f, r * k * f + r * q);
    const Matrix rz = r * z;
    report.max_frame_invariance_residual_z =
        std::max(report.max_frame_invariance_residual_z, scaled(norm(z_rot - rz), norm(rz)));

    report.min_dissipation = std::min(report.min_dissipation, frob(z, q));
    ++report.samples_tested;
  }

  report.pass = report.max_frame_invariance_residual_w <= tol && report.max_frame_invariance_residual_z <= tol &&
                report.max_angular_momentum_residual <= tol && report.min_dissipation >= -tol;
  return report;
}

}  // namespace visco
