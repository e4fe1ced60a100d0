#include "visco/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace visco {

namespace {

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) throw DimensionMismatch("dimension must be 1, 2 or 3, got " + std::to_string(dim));
}

void check_same(int a, int b) {
  if (a != b) throw DimensionMismatch("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

}  // namespace

// ---------------------------------------------------------------- Vector

Vector::Vector(int dim) : dim_(dim) { check_dim(dim); }

Vector::Vector(std::initializer_list<double> values) : dim_(static_cast<int>(values.size())) {
  check_dim(dim_);
  std::copy(values.begin(), values.end(), v_.begin());
}

Vector Vector::unit(int dim, int axis) {
  Vector e(dim);
  e[axis] = 1.0;
  return e;
}

Vector& Vector::operator+=(const Vector& o) {
  check_same(dim_, o.dim_);
  for (int i = 0; i < dim_; ++i) v_[i] += o.v_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& o) {
  check_same(dim_, o.dim_);
  for (int i = 0; i < dim_; ++i) v_[i] -= o.v_[i];
  return *this;
}

Vector& Vector::operator*=(double s) {
  for (int i = 0; i < dim_; ++i) v_[i] *= s;
  return *this;
}

bool operator==(const Vector& a, const Vector& b) {
  return a.dim_ == b.dim_ && std::equal(a.v_.begin(), a.v_.begin() + a.dim_, b.v_.begin());
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator*(double s, Vector a) { return a *= s; }

double dot(const Vector& a, const Vector& b) {
  check_same(a.dim(), b.dim());
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vector& a) { return std::sqrt(dot(a, a)); }

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(int dim) : dim_(dim) { check_dim(dim); }

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) : dim_(static_cast<int>(rows.size())) {
  check_dim(dim_);
  int i = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != dim_) throw DimensionMismatch("matrix rows must have equal length");
    int j = 0;
    for (double x : row) (*this)(i, j++) = x;
    ++i;
  }
}

Matrix Matrix::identity(int dim) {
  Matrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::initializer_list<double> d) {
  Matrix m(static_cast<int>(d.size()));
  int i = 0;
  for (double x : d) {
    m(i, i) = x;
    ++i;
  }
  return m;
}

Matrix Matrix::diagonal(const Vector& d) {
  Matrix m(d.dim());
  for (int i = 0; i < d.dim(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::from_entries(std::span<const double> entries) {
  int dim = 0;
  switch (entries.size()) {
    case 1: dim = 1; break;
    case 4: dim = 2; break;
    case 9: dim = 3; break;
    default: throw DimensionMismatch("expected 1, 4 or 9 entries, got " + std::to_string(entries.size()));
  }
  Matrix m(dim);
  std::copy(entries.begin(), entries.end(), m.a_.begin());
  return m;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  check_same(dim_, o.dim_);
  for (int k = 0; k < size(); ++k) a_[k] += o.a_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  check_same(dim_, o.dim_);
  for (int k = 0; k < size(); ++k) a_[k] -= o.a_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (int k = 0; k < size(); ++k) a_[k] *= s;
  return *this;
}

bool Matrix::is_finite() const {
  return std::all_of(a_.begin(), a_.begin() + size(), [](double x) { return std::isfinite(x); });
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.dim_ == b.dim_ && std::equal(a.a_.begin(), a.a_.begin() + a.size(), b.a_.begin());
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator-(Matrix a) { return a *= -1.0; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  check_same(a.dim(), b.dim());
  const int n = a.dim();
  Matrix c(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double aik = a(i, k);
      for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vector operator*(const Matrix& a, const Vector& x) {
  check_same(a.dim(), x.dim());
  Vector y(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) t(i, j) = a(j, i);
  return t;
}

Matrix sym(const Matrix& a) {
  Matrix s(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

Matrix skew(const Matrix& a) {
  Matrix s(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) s(i, j) = 0.5 * (a(i, j) - a(j, i));
  return s;
}

double trace(const Matrix& a) {
  double t = 0.0;
  for (int i = 0; i < a.dim(); ++i) t += a(i, i);
  return t;
}

double frob(const Matrix& a, const Matrix& b) {
  check_same(a.dim(), b.dim());
  double s = 0.0;
  for (int k = 0; k < a.size(); ++k) s += a.flat(k) * b.flat(k);
  return s;
}

double norm(const Matrix& a) { return std::sqrt(frob(a, a)); }

double det(const Matrix& a) {
  switch (a.dim()) {
    case 1: return a(0, 0);
    case 2: return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    default:
      return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
             a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
  }
}

DetInverse det_inv(const Matrix& a) {
  const double d = det(a);
  if (!(std::abs(d) > kSingularEps)) throw SingularMatrix("matrix is singular (|det| = " + std::to_string(std::abs(d)) + ")");
  Matrix inv(a.dim());
  switch (a.dim()) {
    case 1: inv(0, 0) = 1.0 / d; break;
    case 2:
      inv(0, 0) = a(1, 1) / d;
      inv(0, 1) = -a(0, 1) / d;
      inv(1, 0) = -a(1, 0) / d;
      inv(1, 1) = a(0, 0) / d;
      break;
    default:
      // adjugate / det
      inv(0, 0) = (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) / d;
      inv(0, 1) = (a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2)) / d;
      inv(0, 2) = (a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1)) / d;
      inv(1, 0) = (a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2)) / d;
      inv(1, 1) = (a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0)) / d;
      inv(1, 2) = (a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2)) / d;
      inv(2, 0) = (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0)) / d;
      inv(2, 1) = (a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1)) / d;
      inv(2, 2) = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) / d;
      break;
  }
  return {d, inv};
}

Matrix inverse(const Matrix& a) { return det_inv(a).inverse; }

Matrix power(const Matrix& a, int k) {
  Matrix r = Matrix::identity(a.dim());
  for (int i = 0; i < k; ++i) r = r * a;
  return r;
}

Matrix outer(const Vector& a, const Vector& b) {
  check_same(a.dim(), b.dim());
  Matrix m(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) m(i, j) = a[i] * b[j];
  return m;
}

SymmetricEigen symmetric_eigen(const Matrix& input) {
  const int n = input.dim();
  Matrix a = sym(input);
  Matrix v = Matrix::identity(n);

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off <= 1e-300 || off <= 1e-34 * frob(a, a)) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::array<int, kMaxDim> order{0, 1, 2};
  std::sort(order.begin(), order.begin() + n, [&](int i, int j) { return a(i, i) < a(j, j); });
  SymmetricEigen out{Vector(n), Matrix(n)};
  for (int k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (int i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

Matrix sqrt_spd(const Matrix& a) {
  const double scale = std::max(1.0, norm(a));
  if (norm(skew(a)) > 1e-10 * scale) throw NotSPD("matrix is not symmetric");
  const SymmetricEigen eig = symmetric_eigen(a);
  const int n = a.dim();
  for (int k = 0; k < n; ++k)
    if (!(eig.values[k] > 0.0)) throw NotSPD("matrix has a non-positive eigenvalue " + std::to_string(eig.values[k]));
  Matrix s(n);
  for (int k = 0; k < n; ++k) {
    const double r = std::sqrt(eig.values[k]);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s(i, j) += r * eig.vectors(i, k) * eig.vectors(j, k);
  }
  return sym(s);
}

Matrix random_rotation(int dim, std::uint64_t seed) {
  check_dim(dim);
  if (dim == 1) return Matrix::identity(1);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle_dist(0.0, std::numbers::pi);
  std::normal_distribution<double> normal(0.0, 1.0);

  if (dim == 2) {
    const double theta = angle_dist(rng) * (normal(rng) < 0.0 ? -1.0 : 1.0);
    const double c = std::cos(theta), s = std::sin(theta);
    return Matrix{{c, -s}, {s, c}};
  }

  Vector axis(3);
  double len = 0.0;
  while (len < 1e-8) {
    for (int i = 0; i < 3; ++i) axis[i] = normal(rng);
    len = norm(axis);
  }
  axis *= 1.0 / len;
  const double theta = angle_dist(rng);
  // Rodrigues: exp(theta K) = I + sin(theta) K + (1 - cos(theta)) K^2 for unit-axis skew K.
  Matrix k{{0.0, -axis[2], axis[1]}, {axis[2], 0.0, -axis[0]}, {-axis[1], axis[0], 0.0}};
  return Matrix::identity(3) + std::sin(theta) * k + (1.0 - std::cos(theta)) * (k * k);
}

// ---------------------------------------------------------------- FourthOrderTensor

FourthOrderTensor::FourthOrderTensor(int dim) : dim_(dim) { check_dim(dim); }

FourthOrderTensor FourthOrderTensor::identity(int dim) {
  FourthOrderTensor t(dim);
  for (int r = 0; r < dim * dim; ++r) t(r, r) = 1.0;
  return t;
}

FourthOrderTensor FourthOrderTensor::symmetrizer(int dim) {
  return from_map(dim, [](const Matrix& q) { return sym(q); });
}

Matrix FourthOrderTensor::apply(const Matrix& q) const {
  check_same(dim_, q.dim());
  Matrix out(dim_);
  const int n2 = rows();
  for (int r = 0; r < n2; ++r) {
    double s = 0.0;
    for (int c = 0; c < n2; ++c) s += (*this)(r, c) * q.flat(c);
    out.flat(r) = s;
  }
  return out;
}

bool FourthOrderTensor::is_finite() const {
  const int n4 = rows() * rows();
  return std::all_of(c_.begin(), c_.begin() + n4, [](double x) { return std::isfinite(x); });
}

bool FourthOrderTensor::is_symmetric(double tol) const {
  double scale = 0.0;
  for (int k = 0; k < rows() * rows(); ++k) scale = std::max(scale, std::abs(c_[k]));
  for (int r = 0; r < rows(); ++r)
    for (int c = r + 1; c < rows(); ++c)
      if (std::abs((*this)(r, c) - (*this)(c, r)) > tol * std::max(1.0, scale)) return false;
  return true;
}

FourthOrderTensor& FourthOrderTensor::operator*=(double s) {
  for (int k = 0; k < rows() * rows(); ++k) c_[k] *= s;
  return *this;
}

FourthOrderTensor operator*(double s, FourthOrderTensor t) { return t *= s; }

FourthOrderTensor operator+(FourthOrderTensor a, const FourthOrderTensor& b) {
  check_same(a.dim(), b.dim());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.rows(); ++c) a(r, c) += b(r, c);
  return a;
}

}  // namespace visco
