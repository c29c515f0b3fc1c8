#include <gtest/gtest.h>

#include <random>

#include "fpu/chain.hpp"
#include "fpu/errors.hpp"
#include "fpu/reduction.hpp"
#include "test_util.hpp"

namespace fpu {
namespace {

TEST(Reduction, DimensionsAndMasses) {
  const auto red = build_reduced(5, 0.01, 1.0);
  ASSERT_EQ(red.dof(), 4u);
  EXPECT_DOUBLE_EQ(red.masses()[0], 1.0);
  EXPECT_DOUBLE_EQ(red.masses()[1], 100.0);
  EXPECT_DOUBLE_EQ(red.masses()[2], 1.0);
  EXPECT_DOUBLE_EQ(red.masses()[3], 100.0);
  EXPECT_THROW(build_reduced(4, 0.01, 1.0), InvalidArgument);
  EXPECT_THROW(build_reduced(1, 0.01, 1.0), InvalidArgument);
}

// The printed p = 5 system, written out by hand.
std::vector<double> hand_rhs_p5(std::span<const double> q) {
  const double q1 = q[0], q2 = q[1], q3 = q[2], q4 = q[3];
  return {q2 * q2 - 2 * q1 * q2, q3 * q3 - 2 * q2 * q3 + 2 * q1 * q2 - q1 * q1,
          q4 * q4 - 2 * q3 * q4 + 2 * q2 * q3 - q2 * q2, 2 * q3 * q4 - q3 * q3};
}

TEST(Reduction, QuadraticPartMatchesHandWrittenSystem) {
  std::mt19937_64 rng(1);
  const auto red = build_reduced(5, 0.01, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto q = test::random_vector(rng, 4, 2.0);
    EXPECT_LT(test::max_abs_diff(red.quadratic(q), hand_rhs_p5(q)), 1e-14);
  }
}

TEST(Reduction, LiftedStatesStayOnSymmetricManifold) {
  std::mt19937_64 rng(2);
  for (std::size_t p : {3u, 5u, 7u, 9u}) {
    const auto red = build_reduced(p, 0.01, 1.0);
    const auto full = build_chain({.n_pairs = p, .a = 0.01, .alpha = 1.0});
    for (int trial = 0; trial < 5; ++trial) {
      ReducedState s{test::random_vector(rng, p - 1, 0.5), test::random_vector(rng, p - 1)};
      EXPECT_LT(symmetry_residual(full, s), 1e-13) << p;
      // The reduced acceleration is the full one restricted to particles 1..p-1.
      const auto lifted = lift_symmetric(s);
      const auto a_full = eval_accel_full(full, lifted);
      const auto a_red = red.accel(s.q);
      for (std::size_t i = 0; i < p - 1; ++i) EXPECT_NEAR(a_red[i], a_full[i], 1e-12);
    }
  }
}

TEST(Reduction, ForceJacobianMatchesFiniteDifferences) {
  std::mt19937_64 rng(3);
  const auto red = build_reduced(7, 0.05, 0.8);
  for (int trial = 0; trial < 5; ++trial) {
    const auto q = test::random_vector(rng, red.dof());
    const auto fd = test::fd_jacobian(
        [&](std::span<const double> y) {
          auto r = red.static_residual(y);
          for (double& x : r) x = -x;
          return r;
        },
        q);
    EXPECT_LT(test::max_abs_diff(red.force_jacobian(q), fd), 1e-7);
  }
}

TEST(Reduction, RightHandSideIsGradientOfPotential) {
  std::mt19937_64 rng(4);
  const auto red = build_reduced(9, 0.01, 1.3);
  for (int trial = 0; trial < 5; ++trial) {
    const auto q = test::random_vector(rng, red.dof(), 0.7);
    const auto g = test::fd_gradient([&](std::span<const double> y) { return red.potential_energy(y); }, q);
    const auto r = red.static_residual(q);
    for (std::size_t i = 0; i < red.dof(); ++i) EXPECT_NEAR(r[i], g[i], 1e-8);
  }
}

TEST(Reduction, ReducedEnergyIsHalfTheLiftedEnergy) {
  std::mt19937_64 rng(6);
  const auto red = build_reduced(5, 0.01, 1.0);
  const auto full = build_chain({.n_pairs = 5, .a = 0.01, .alpha = 1.0});
  ReducedState s{test::random_vector(rng, 4, 0.4), test::random_vector(rng, 4, 0.1)};
  EXPECT_NEAR(hamiltonian(full, lift_symmetric(s)), 2.0 * reduced_energy(red, s), 1e-13);
}

TEST(Reduction, KnownEquilibriaOfP3) {
  const auto red = build_reduced(3, 0.01, 1.0);
  for (const auto& q : std::vector<std::vector<double>>{{0, 0}, {-2, -1}, {1, -1}, {1, 2}})
    EXPECT_LT(max_abs(red.static_residual(q)), 1e-14);
}

}  // namespace
}  // namespace fpu
