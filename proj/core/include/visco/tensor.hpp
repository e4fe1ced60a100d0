#pragma once

/**
 * @file tensor.hpp
 *
 * @brief Small dense matrices (n <= 3) and linear maps between them.
 *
 * Matrices are stored row-major in fixed storage with a runtime dimension,
 * so fields of them can live in plain std::vector without allocation per entry.
 */

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>

#include "visco/errors.hpp"

namespace visco {

inline constexpr int kMaxDim = 3;
inline constexpr double kSingularEps = 1e-14;

class Vector {
 public:
  Vector() = default;
  explicit Vector(int dim);
  Vector(std::initializer_list<double> values);

  static Vector unit(int dim, int axis);

  int dim() const noexcept { return dim_; }
  double& operator[](int i) { return v_[i]; }
  double operator[](int i) const { return v_[i]; }
  std::span<const double> values() const { return {v_.data(), static_cast<std::size_t>(dim_)}; }

  Vector& operator+=(const Vector& o);
  Vector& operator-=(const Vector& o);
  Vector& operator*=(double s);

  friend bool operator==(const Vector& a, const Vector& b);

 private:
  int dim_ = 0;
  std::array<double, kMaxDim> v_{};
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator*(double s, Vector a);
double dot(const Vector& a, const Vector& b);
double norm(const Vector& a);

class Matrix {
 public:
  Matrix() = default;
  /// Zero matrix of size dim x dim.
  explicit Matrix(int dim);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(int dim);
  static Matrix diagonal(std::initializer_list<double> d);
  static Matrix diagonal(const Vector& d);
  /// Row-major entries; size must be a perfect square 1, 4 or 9.
  static Matrix from_entries(std::span<const double> entries);

  int dim() const noexcept { return dim_; }
  int size() const noexcept { return dim_ * dim_; }
  double& operator()(int i, int j) { return a_[i * dim_ + j]; }
  double operator()(int i, int j) const { return a_[i * dim_ + j]; }
  /// Flat row-major access, index in [0, dim*dim).
  double& flat(int k) { return a_[k]; }
  double flat(int k) const { return a_[k]; }
  std::span<const double> entries() const { return {a_.data(), static_cast<std::size_t>(size())}; }

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(double s);

  bool is_finite() const;

  friend bool operator==(const Matrix& a, const Matrix& b);

 private:
  int dim_ = 0;
  std::array<double, kMaxDim * kMaxDim> a_{};
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator-(Matrix a);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, const Vector& x);

Matrix transpose(const Matrix& a);
Matrix sym(const Matrix& a);
Matrix skew(const Matrix& a);
double trace(const Matrix& a);
/// Frobenius inner product tr(A^T B). Throws DimensionMismatch.
double frob(const Matrix& a, const Matrix& b);
double norm(const Matrix& a);
double det(const Matrix& a);
/// Throws SingularMatrix when |det A| <= kSingularEps.
Matrix inverse(const Matrix& a);
Matrix power(const Matrix& a, int k);
/// a (x) b with entries a_i b_j.
Matrix outer(const Vector& a, const Vector& b);

struct DetInverse {
  double det;
  Matrix inverse;
};
DetInverse det_inv(const Matrix& a);

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // column k is the eigenvector of values[k]
};
/// Cyclic Jacobi; `a` must be symmetric to within roundoff.
SymmetricEigen symmetric_eigen(const Matrix& a);

/// Symmetric square root of an SPD matrix. Throws NotSPD.
Matrix sqrt_spd(const Matrix& a);

/// exp(K) for a random skew K with rotation angle uniform in [0, pi]; deterministic per seed.
Matrix random_rotation(int dim, std::uint64_t seed);

/// Linear map on dim x dim matrices, stored as a (dim^2) x (dim^2) row-major array acting on
/// row-major vectorized matrices.
class FourthOrderTensor {
 public:
  FourthOrderTensor() = default;
  explicit FourthOrderTensor(int dim);

  static FourthOrderTensor identity(int dim);
  /// Q -> sym(Q)
  static FourthOrderTensor symmetrizer(int dim);

  /// Builds the tensor by applying `map` to the matrix units E_kl.
  template <typename Map>
  static FourthOrderTensor from_map(int dim, Map&& map) {
    FourthOrderTensor t(dim);
    const int n2 = dim * dim;
    for (int col = 0; col < n2; ++col) {
      Matrix unit(dim);
      unit.flat(col) = 1.0;
      const Matrix image = map(unit);
      for (int row = 0; row < n2; ++row) t(row, col) = image.flat(row);
    }
    return t;
  }

  int dim() const noexcept { return dim_; }
  int rows() const noexcept { return dim_ * dim_; }
  double& operator()(int row, int col) { return c_[row * rows() + col]; }
  double operator()(int row, int col) const { return c_[row * rows() + col]; }
  /// (i,j),(k,l) indexing: coefficient of Q_kl in (MQ)_ij.
  double at(int i, int j, int k, int l) const { return (*this)(i * dim_ + j, k * dim_ + l); }

  Matrix apply(const Matrix& q) const;
  bool is_finite() const;
  bool is_symmetric(double tol) const;

  FourthOrderTensor& operator*=(double s);

 private:
  int dim_ = 0;
  std::array<double, kMaxDim * kMaxDim * kMaxDim * kMaxDim> c_{};
};

FourthOrderTensor operator*(double s, FourthOrderTensor t);
FourthOrderTensor operator+(FourthOrderTensor a, const FourthOrderTensor& b);

}  // namespace visco
