#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fpu/errors.hpp"
#include "fpu/spectral.hpp"
#include "test_util.hpp"

namespace fpu {
namespace {

TEST(PairEigenvalues, ClosedFormProperties) {
  for (std::size_t p : {3u, 5u, 9u, 47u})
    for (std::size_t j = 1; 2 * j < p; ++j) {
      const auto [lo, hi] = pair_eigenvalues(0.01, p, j);
      const double s = std::sin(std::numbers::pi * double(j) / double(p));
      EXPECT_NEAR(lo + hi, 2.02, 1e-14);
      EXPECT_NEAR(lo * hi, 4.0 * 0.01 * s * s, 1e-14);
      EXPECT_LT(lo, hi);
    }
}

TEST(Eigendecompose, BasisDiagonalisesMassAndStiffness) {
  for (std::size_t p : {3u, 5u, 9u, 15u, 31u}) {
    const auto red = build_reduced(p, 0.01, 1.0);
    const auto basis = eigendecompose(red);
    const std::size_t n = red.dof();
    const Matrix& t = basis.transform;
    const Matrix tmt = t.transposed() * Matrix::diagonal(red.masses()) * t;
    EXPECT_LT(test::max_abs_diff(tmt, Matrix::identity(n)), 1e-12) << p;
    const Matrix tkt = t.transposed() * red.stiffness() * t;
    EXPECT_LT(test::max_abs_diff(tkt, Matrix::diagonal(basis.lambdas)), 1e-12) << p;
    EXPECT_LT(test::max_abs_diff(basis.inverse_transform * t, Matrix::identity(n)), 1e-12);
  }
}

TEST(Eigendecompose, PairOrderAndLabels) {
  const std::size_t p = 9;
  const auto basis = eigendecompose(build_reduced(p, 0.01, 1.0));
  ASSERT_EQ(basis.lambdas.size(), 8u);
  for (std::size_t j = 1; j <= 4; ++j) {
    const auto [lo, hi] = pair_eigenvalues(0.01, p, j);
    EXPECT_NEAR(basis.lambdas[2 * j - 2], lo, 1e-13);
    EXPECT_NEAR(basis.lambdas[2 * j - 1], hi, 1e-13);
    EXPECT_EQ(basis.labels[2 * j - 2], (ModeLabel{ModeKind::acoustic, j}));
    EXPECT_EQ(basis.labels[2 * j - 1], (ModeLabel{ModeKind::optical, j}));
  }
}

TEST(Eigendecompose, SignConventionLargestEntryPositive) {
  const auto basis = eigendecompose(build_reduced(7, 0.01, 1.0));
  for (std::size_t c = 0; c < basis.transform.cols(); ++c) {
    const auto col = basis.transform.column(c);
    double big = 0.0;
    for (double v : col)
      if (std::abs(v) > std::abs(big) * (1 + 1e-9)) big = v;
    EXPECT_GT(big, 0.0) << c;
  }
}

TEST(QuasiHarmonic, RhsMatchesTransformedReducedSystem) {
  std::mt19937_64 rng(21);
  for (std::size_t p : {3u, 5u, 9u, 13u}) {
    const auto red = build_reduced(p, 0.01, 1.0);
    const auto basis = eigendecompose(red);
    const auto qh = to_quasi_harmonic(red, basis);
    for (int trial = 0; trial < 5; ++trial) {
      const auto x = test::random_vector(rng, red.dof(), 0.3);
      const auto oracle = basis.to_modal(red.accel(basis.from_modal(x)));
      const auto got = eval_qh_rhs(qh, x, 1.0);
      EXPECT_LT(test::max_abs_diff(got, oracle), 1e-11 * (1.0 + max_abs(oracle))) << p;
    }
  }
}

TEST(QuasiHarmonic, AccelerationIsWeightedGradientOfEnergy) {
  std::mt19937_64 rng(22);
  const auto red = build_reduced(5, 0.01, 1.0);
  const auto qh = to_quasi_harmonic(red, eigendecompose(red));
  const std::vector<double> s{0.5, -2.0, 3.0, 0.25};
  for (const auto& sys : {qh, rescale(qh, s)}) {
    const auto x = test::random_vector(rng, 4, 0.5);
    const std::vector<double> zero(4, 0.0);
    const auto g = test::fd_gradient([&](std::span<const double> y) { return sys.energy(y, zero); }, x);
    const auto acc = sys.accel(x);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(sys.weights()[i] * acc[i], -g[i], 1e-7);
  }
}

TEST(QuasiHarmonic, EnergyEqualsReducedEnergy) {
  std::mt19937_64 rng(23);
  const auto red = build_reduced(7, 0.01, 1.0);
  const auto basis = eigendecompose(red);
  const auto qh = to_quasi_harmonic(red, basis);
  const auto x = test::random_vector(rng, 6, 0.3);
  const auto v = test::random_vector(rng, 6, 0.1);
  ReducedState s{basis.from_modal(x), basis.from_modal(v)};
  EXPECT_NEAR(qh.energy(x, v), reduced_energy(red, s), 1e-12);
}

TEST(QuasiHarmonic, RescaleIsAChangeOfVariables) {
  std::mt19937_64 rng(24);
  const auto red = build_reduced(5, 0.01, 1.0);
  const auto qh = to_quasi_harmonic(red, eigendecompose(red));
  for (int trial = 0; trial < 10; ++trial) {
    auto s = test::random_vector(rng, 4, 3.0);
    for (double& v : s)
      if (std::abs(v) < 0.1) v = 0.5;
    const auto scaled = rescale(qh, s);
    const auto y = test::random_vector(rng, 4, 0.3);
    std::vector<double> x(4);
    for (std::size_t i = 0; i < 4; ++i) x[i] = s[i] * y[i];
    const auto ax = qh.accel(x);
    const auto ay = scaled.accel(y);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(ay[i], ax[i] / s[i], 1e-12);
  }
  EXPECT_THROW(rescale(qh, std::vector<double>{1, 0, 1, 1}), InvalidArgument);
}

TEST(QuasiHarmonic, PermuteReordersEquations) {
  const auto red = build_reduced(5, 0.01, 1.0);
  const auto qh = to_quasi_harmonic(red, eigendecompose(red));
  const std::vector<std::size_t> order{2, 3, 0, 1};
  const auto perm = permute(qh, order);
  const std::vector<double> y{0.1, -0.2, 0.3, 0.05};
  std::vector<double> x(4);
  for (std::size_t r = 0; r < 4; ++r) x[order[r]] = y[r];
  const auto ax = qh.accel(x);
  const auto ay = perm.accel(y);
  for (std::size_t r = 0; r < 4; ++r) {
    EXPECT_NEAR(ay[r], ax[order[r]], 1e-15);
    EXPECT_EQ(perm.labels()[r], qh.labels()[order[r]]);
  }
}

TEST(QuasiHarmonic, ConstructorValidatesEntries) {
  EXPECT_THROW(QuasiHarmonicSystem(0, 0.0, 1.0, {1.0}, {}, {{0, 0, 1, 1.0}}), InvalidArgument);
  EXPECT_THROW(QuasiHarmonicSystem(0, 0.0, 1.0, {1.0, 2.0}, {ModeLabel{}}, {}), DimensionMismatch);
}

TEST(QuasiHarmonic, EntriesAreNormalisedAndMerged) {
  const QuasiHarmonicSystem sys(0, 0.0, 1.0, {1.0, 2.0}, {}, {{0, 1, 0, 1.0}, {0, 0, 1, 0.5}});
  ASSERT_EQ(sys.entries().size(), 1u);
  EXPECT_DOUBLE_EQ(sys.coefficient(0, 1, 0), 1.5);
  EXPECT_DOUBLE_EQ(sys.coefficient(0, 0, 1), 1.5);
  EXPECT_DOUBLE_EQ(sys.coefficient(1, 0, 1), 0.0);
}

}  // namespace
}  // namespace fpu
