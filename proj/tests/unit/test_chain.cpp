#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <random>

#include "fpu/chain.hpp"
#include "fpu/errors.hpp"
#include "fpu/integrator.hpp"
#include "test_util.hpp"

namespace fpu {
namespace {

TEST(Chain, MassesAlternate) {
  const auto sys = build_chain({.n_pairs = 3, .a = 0.25});
  ASSERT_EQ(sys.size(), 6u);
  for (std::size_t j = 0; j < 6; ++j) EXPECT_DOUBLE_EQ(sys.masses()[j], j % 2 == 0 ? 1.0 : 4.0);
}

TEST(Chain, RejectsBadParameters) {
  EXPECT_THROW(build_chain({.n_pairs = 1}), InvalidArgument);
  EXPECT_THROW(build_chain({.n_pairs = 3, .a = 0.0}), InvalidArgument);
  EXPECT_THROW(build_chain({.n_pairs = 3, .a = -1.0}), InvalidArgument);
}

TEST(Chain, ForceIsMinusGradientOfPotential) {
  std::mt19937_64 rng(5);
  const auto sys = build_chain({.n_pairs = 4, .a = 0.3, .alpha = 0.7, .beta = 0.2});
  for (int trial = 0; trial < 10; ++trial) {
    const auto q = test::random_vector(rng, sys.size(), 0.5);
    const auto g = test::fd_gradient([&](std::span<const double> y) { return sys.potential_energy(y); }, q);
    const auto acc = sys.accel(q);
    for (std::size_t j = 0; j < sys.size(); ++j) EXPECT_NEAR(sys.masses()[j] * acc[j], -g[j], 1e-8);
  }
}

TEST(Chain, PeriodicCouplingLinksLastAndFirst) {
  const auto sys = build_chain({.n_pairs = 2, .a = 1.0, .alpha = 0.0});
  std::vector<double> q(4, 0.0);
  q[3] = 1.0;
  const auto acc = sys.accel(q);
  EXPECT_DOUBLE_EQ(acc[0], 1.0);   // pulled by the last particle
  EXPECT_DOUBLE_EQ(acc[3], -2.0);
}

TEST(Chain, LinearSpectrumMatchesGeneralisedEigenproblem) {
  for (std::size_t n_pairs : {2u, 3u, 5u, 8u}) {
    for (double a : {0.01, 0.5, 1.0}) {
      const auto sys = build_chain({.n_pairs = n_pairs, .a = a});
      const std::size_t n = sys.size();
      Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n), m = Eigen::MatrixXd::Zero(n, n);
      for (std::size_t j = 0; j < n; ++j) {
        k(j, j) = 2.0;
        k(j, (j + 1) % n) -= 1.0;
        k(j, (j + n - 1) % n) -= 1.0;
        m(j, j) = sys.masses()[j];
      }
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> oracle(k, m);
      auto got = linear_spectrum_full(sys);
      ASSERT_EQ(got.size(), n);
      EXPECT_TRUE(std::is_sorted(got.rbegin(), got.rend()));
      for (std::size_t j = 0; j < n; ++j)
        EXPECT_NEAR(got[j], oracle.eigenvalues()[n - 1 - j], 1e-12) << n_pairs << " " << a;
    }
  }
}

TEST(Chain, EmbedRestrictRoundTrip) {
  std::mt19937_64 rng(9);
  FullState s{test::random_vector(rng, 6), test::random_vector(rng, 6)};
  for (std::size_t k : {1u, 2u, 3u}) {
    const auto big = embed_state(s, k);
    ASSERT_EQ(big.size(), 6 * k);
    for (std::size_t j = 0; j < big.size(); ++j) EXPECT_EQ(big.q[j], s.q[j % 6]);
    const auto back = restrict_state(big, 6);
    EXPECT_EQ(back.q, s.q);
    EXPECT_EQ(back.v, s.v);
  }
}

TEST(Chain, EmbeddedAccelerationIsPeriodic) {
  std::mt19937_64 rng(10);
  const auto small = build_chain({.n_pairs = 3, .a = 0.01});
  const auto big = build_chain({.n_pairs = 9, .a = 0.01});
  FullState s{test::random_vector(rng, 6, 0.3), test::random_vector(rng, 6)};
  const auto a_small = eval_accel_full(small, s);
  const auto a_big = eval_accel_full(big, embed_state(s, 3));
  for (std::size_t j = 0; j < 18; ++j) EXPECT_NEAR(a_big[j], a_small[j % 6], 1e-15);
}

TEST(Chain, EnergyAndMomentumConserved) {
  const auto sys = build_chain({.n_pairs = 3, .a = 0.01});
  FullState s{{0.08, -0.085, 0.01, 0.075, -0.07, 0.0}, {0.0, 0.01, 0.0, -0.02, 0.0, 0.005}};
  IntegratorConfig cfg;
  cfg.t_end = 200.0;
  cfg.sample_dt = 10.0;
  const auto res = integrate(sys, s.q, s.v, cfg);
  ASSERT_TRUE(res.ok());
  const double h0 = hamiltonian(sys, s);
  const double p0 = total_momentum(sys, s);
  for (std::size_t k = 0; k < res.trajectory.size(); ++k) {
    const auto q = res.trajectory.positions(k);
    const auto v = res.trajectory.velocities(k);
    FullState st{{q.begin(), q.end()}, {v.begin(), v.end()}};
    EXPECT_NEAR(hamiltonian(sys, st), h0, 1e-8 * std::abs(h0));
    EXPECT_NEAR(total_momentum(sys, st), p0, 1e-12);
  }
}

}  // namespace
}  // namespace fpu
