#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <random>

#include "fpu/errors.hpp"
#include "fpu/linalg.hpp"
#include "test_util.hpp"

namespace fpu {
namespace {

Matrix random_symmetric(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r; c < n; ++c) m(r, c) = m(c, r) = u(rng);
  return m;
}

TEST(Jacobi, MatchesEigenSelfAdjointSolver) {
  std::mt19937_64 rng(11);
  for (std::size_t n : {1u, 2u, 5u, 12u, 30u}) {
    const Matrix a = random_symmetric(rng, n);
    Eigen::MatrixXd e(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) e(r, c) = a(r, c);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle(e);

    const auto eig = jacobi_eigen(a);
    std::vector<double> got = eig.values;
    std::sort(got.begin(), got.end());
    for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(got[k], oracle.eigenvalues()[k], 1e-12) << n;

    // A v = lambda v and V orthonormal.
    const Matrix av = a * eig.vectors;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t r = 0; r < n; ++r)
        EXPECT_NEAR(av(r, k), eig.values[k] * eig.vectors(r, k), 1e-12);
    const Matrix gram = eig.vectors.transposed() * eig.vectors;
    EXPECT_LT(test::max_abs_diff(gram, Matrix::identity(n)), 1e-13);
  }
}

TEST(Jacobi, DegenerateEigenvaluesKeepOrthonormalBasis) {
  Matrix a = Matrix::identity(4);
  a(0, 1) = a(1, 0) = 1.0;
  const auto eig = jacobi_eigen(a);
  const Matrix gram = eig.vectors.transposed() * eig.vectors;
  EXPECT_LT(test::max_abs_diff(gram, Matrix::identity(4)), 1e-14);
  std::vector<double> v = eig.values;
  std::sort(v.begin(), v.end());
  EXPECT_NEAR(v[0], 0.0, 1e-14);
  EXPECT_NEAR(v[1], 1.0, 1e-14);
  EXPECT_NEAR(v[2], 1.0, 1e-14);
  EXPECT_NEAR(v[3], 2.0, 1e-14);
}

TEST(Solve, RecoversKnownSolution) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + trial % 7;
    Matrix a(n, n);
    const auto x = test::random_vector(rng, n);
    for (std::size_t r = 0; r < n; ++r) {
      const auto row = test::random_vector(rng, n);
      for (std::size_t c = 0; c < n; ++c) a(r, c) = row[c];
      a(r, r) += 3.0;
    }
    const auto b = multiply(a, x);
    EXPECT_LT(test::max_abs_diff(solve(a, b), x), 1e-12);
  }
}

TEST(Solve, SingularMatrixThrows) {
  Matrix a(2, 2, 1.0);
  EXPECT_THROW(solve(a, {1.0, 2.0}), InvalidArgument);
}

TEST(LeastSquares, ExactForConsistentOverdeterminedSystem) {
  Matrix a(4, 2);
  const double rows[4][2] = {{1, 0}, {0, 1}, {1, 1}, {2, -1}};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 2; ++c) a(r, c) = rows[r][c];
  const std::vector<double> x{0.5, -2.0};
  const auto b = multiply(a, x);
  EXPECT_LT(test::max_abs_diff(least_squares(a, b), x), 1e-13);
}

TEST(Matrix, ProductAndTranspose) {
  Matrix a(2, 3);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 3; ++c) a(r, c) = double(r * 3 + c);
  const Matrix ata = a.transposed() * a;
  EXPECT_EQ(ata.rows(), 3u);
  EXPECT_DOUBLE_EQ(ata(0, 0), 9.0);
  EXPECT_DOUBLE_EQ(ata(1, 2), 1.0 * 2.0 + 4.0 * 5.0);
  EXPECT_DOUBLE_EQ(norm2(std::vector<double>{3.0, 4.0}), 5.0);
  EXPECT_DOUBLE_EQ(max_abs(std::vector<double>{-7.0, 2.0}), 7.0);
}

}  // namespace
}  // namespace fpu
