#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "visco/errors.hpp"
#include "visco/tensor.hpp"

using namespace visco;

namespace {

double max_entry_diff(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (int k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a.flat(k) - b.flat(k)));
  return m;
}

}  // namespace

TEST(Matrix, DeterminantAndInverse) {
  const Matrix a{{2.0, 1.0, 0.0}, {0.0, 3.0, 1.0}, {1.0, 0.0, 1.0}};
  EXPECT_NEAR(det(a), 7.0, 1e-14);
  EXPECT_LT(max_entry_diff(a * inverse(a), Matrix::identity(3)), 1e-14);
  const DetInverse di = det_inv(a);
  EXPECT_NEAR(di.det, 7.0, 1e-14);
  EXPECT_EQ(di.inverse, inverse(a));
}

TEST(Matrix, SingularInverseThrows) {
  const Matrix a{{1.0, 2.0}, {2.0, 4.0}};
  EXPECT_THROW(inverse(a), SingularMatrix);
}

TEST(Matrix, FrobeniusRejectsMismatchedSizes) {
  EXPECT_THROW(frob(Matrix::identity(2), Matrix::identity(3)), DimensionMismatch);
  EXPECT_DOUBLE_EQ(frob(Matrix::identity(3), Matrix::identity(3)), 3.0);
  EXPECT_DOUBLE_EQ(norm(Matrix::identity(2)), std::sqrt(2.0));
}

TEST(Matrix, SymSkewSplit) {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 3; ++n) {
    const Matrix a = oracle::random_matrix(n, rng);
    EXPECT_LT(max_entry_diff(sym(a) + skew(a), a), 1e-15);
    EXPECT_LT(std::abs(frob(sym(a), skew(a))), 1e-15);
    EXPECT_EQ(transpose(sym(a)), sym(a));
  }
}

TEST(Matrix, PowerMatchesRepeatedProduct) {
  const Matrix a{{0.5, 0.2}, {-0.1, 1.5}};
  EXPECT_EQ(power(a, 0), Matrix::identity(2));
  EXPECT_LT(max_entry_diff(power(a, 3), a * a * a), 1e-15);
}

TEST(SymmetricEigen, ReconstructsMatrix) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 2;
    const Matrix a = sym(oracle::random_matrix(n, rng));
    const SymmetricEigen e = symmetric_eigen(a);
    const Matrix recon = e.vectors * Matrix::diagonal(e.values) * transpose(e.vectors);
    EXPECT_LT(max_entry_diff(recon, a), 1e-13);
    for (int i = 1; i < n; ++i) EXPECT_LE(e.values[i - 1], e.values[i]);
  }
}

TEST(SqrtSpd, SquaresBack) {
  std::mt19937_64 rng(5);
  for (int n = 1; n <= 3; ++n) {
    const Matrix f = oracle::random_matrix(n, rng) + 2.0 * Matrix::identity(n);
    const Matrix c = transpose(f) * f;
    const Matrix u = sqrt_spd(c);
    EXPECT_LT(max_entry_diff(u * u, c), 1e-12);
  }
}

TEST(SqrtSpd, RejectsIndefinite) {
  EXPECT_THROW(sqrt_spd(Matrix::diagonal({1.0, -1.0})), NotSPD);
  EXPECT_THROW(sqrt_spd(Matrix{{1.0, 0.5}, {0.0, 1.0}}), NotSPD);
}

TEST(RandomRotation, IsProperOrthogonalAndSeeded) {
  for (int n = 2; n <= 3; ++n) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Matrix r = random_rotation(n, seed);
      EXPECT_LT(max_entry_diff(transpose(r) * r, Matrix::identity(n)), 1e-14);
      EXPECT_NEAR(det(r), 1.0, 1e-14);
      EXPECT_EQ(r, random_rotation(n, seed));
    }
    EXPECT_FALSE(random_rotation(n, 1) == random_rotation(n, 2));
  }
}

TEST(FourthOrderTensor, IdentityAndSymmetrizer) {
  const Matrix q{{1.0, 2.0}, {3.0, 4.0}};
  EXPECT_EQ(FourthOrderTensor::identity(2).apply(q), q);
  EXPECT_LT(max_entry_diff(FourthOrderTensor::symmetrizer(2).apply(q), sym(q)), 1e-15);
  EXPECT_TRUE(FourthOrderTensor::symmetrizer(3).is_symmetric(1e-14));
}

TEST(FourthOrderTensor, FromMapReproducesLinearMap) {
  const Matrix f{{1.0, 0.3}, {-0.2, 0.9}};
  const auto t = FourthOrderTensor::from_map(2, [&](const Matrix& q) { return f * q * transpose(f); });
  const Matrix q{{0.4, -1.0}, {2.0, 0.1}};
  EXPECT_LT(max_entry_diff(t.apply(q), f * q * transpose(f)), 1e-15);
  EXPECT_DOUBLE_EQ(t.at(0, 1, 1, 0), f(0, 1) * f(1, 0));
}
