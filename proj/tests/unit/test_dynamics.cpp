#include <gtest/gtest.h>

#include <cmath>

#include "fpu/dynamics.hpp"
#include "fpu/errors.hpp"
#include "fpu/system_io.hpp"
#include "test_util.hpp"

namespace fpu {
namespace {

TEST(FirstOrderResponse, SolvesTheForcedOscillator) {
  const double ld = 0.0149623, lf = 2.00504, c = -0.0395, amp = 0.2;
  const FirstOrderResponse x(ld, lf, c, amp, 1.0);
  EXPECT_NEAR(x(0.0), 0.0, 1e-15);
  EXPECT_NEAR(x.velocity(0.0), 0.0, 1e-15);
  const double w = std::sqrt(lf), h = 1e-3;
  for (double t : {0.3, 1.7, 12.0, 55.5}) {
    const double xdd = (x(t + h) - 2.0 * x(t) + x(t - h)) / (h * h);
    const double forcing = c * amp * amp * std::cos(w * t) * std::cos(w * t);
    EXPECT_NEAR(xdd + ld * x(t), forcing, 1e-6);
    EXPECT_NEAR(x.velocity(t), (x(t + h) - x(t - h)) / (2 * h), 1e-8);
  }
}

TEST(FirstOrderResponse, MeanOffsetForTabulatedP3System) {
  const auto ref = read_system(test::data_path("reference/p3_quasi_harmonic.txt"));
  const auto x = first_order_response(ref, 0, 1, 0.2);
  // K / (2 lambda_1) with K = c A^2
  EXPECT_NEAR(x.mean_offset(), -0.0395000057 * 0.04 / (2 * 0.0149623), 1e-12);
  EXPECT_NEAR(x.mean_offset(), -0.0528, 1e-4);
  EXPECT_THROW(first_order_response(ref, 0, 0, 0.2), InvalidArgument);
}

TEST(FirstOrderResponse, ApproachesIntegrationForSmallAmplitude) {
  const auto ref = read_system(test::data_path("reference/p3_quasi_harmonic.txt"));
  double previous = 1.0;
  for (double amp : {0.04, 0.02}) {
    IntegratorConfig cfg;
    cfg.t_end = 100.0;
    cfg.sample_dt = 0.5;
    const std::vector<double> x0{0.0, amp}, v0{0.0, 0.0};
    const auto res = integrate(ref, x0, v0, cfg, 'x');
    ASSERT_TRUE(res.ok());
    const auto approx = first_order_response(ref, 0, 1, amp);
    double err = 0.0, size = 0.0;
    for (std::size_t k = 0; k < res.trajectory.size(); ++k) {
      const double x1 = res.trajectory.positions(k)[0];
      err = std::max(err, std::abs(x1 - approx(res.trajectory.times[k])));
      size = std::max(size, std::abs(x1));
    }
    EXPECT_LT(err / size, 0.1);
    EXPECT_LT(err / size, previous);
    previous = err / size;
  }
}

TEST(Cartoon, CoefficientsAsDefined) {
  const std::vector<double> w1{0.1, 1.0};
  const auto c1 = cartoon_system(1, w1);
  EXPECT_NEAR(c1.lambdas()[0], 0.01, 1e-16);
  EXPECT_DOUBLE_EQ(c1.coefficient(0, 0, 1), 1.0);
  EXPECT_DOUBLE_EQ(c1.coefficient(1, 0, 0), 0.5);
  const std::vector<double> w2{0.1, 1.0, 1.05};
  const auto c2 = cartoon_system(2, w2);
  EXPECT_DOUBLE_EQ(c2.coefficient(0, 1, 2), 0.2);
  EXPECT_DOUBLE_EQ(c2.coefficient(1, 0, 2), 0.2);
  EXPECT_DOUBLE_EQ(c2.coefficient(1, 2, 2), 0.25);
  EXPECT_DOUBLE_EQ(c2.coefficient(1, 1, 2), 0.5);
  EXPECT_DOUBLE_EQ(c2.coefficient(2, 0, 1), 0.2);
  EXPECT_DOUBLE_EQ(c2.coefficient(2, 1, 1), 0.25);
  EXPECT_DOUBLE_EQ(c2.coefficient(2, 1, 2), 0.5);
  EXPECT_THROW(cartoon_system(1, w2), InvalidArgument);
  EXPECT_THROW(cartoon_system(3, w2), InvalidArgument);
}

TEST(Cartoon, EnergyConserved) {
  const std::vector<double> w{0.1, 1.0, 1.05};
  const auto sys = cartoon_system(2, w);
  IntegratorConfig cfg;
  cfg.t_end = 300.0;
  const std::vector<double> x0{0.1, 0.3, 0.3}, v0{0.0, 0.0, 0.0};
  const auto res = integrate(sys, x0, v0, cfg, 'x');
  ASSERT_TRUE(res.ok());
  EXPECT_LT(energy_drift(sys, res.trajectory), 1e-8);
}

TEST(ModeActions, ConstantForLinearDynamics) {
  const auto ref = read_system(test::data_path("reference/p3_quasi_harmonic.txt")).with_alpha(0.0);
  IntegratorConfig cfg;
  cfg.t_end = 50.0;
  const std::vector<double> x0{0.3, -0.2}, v0{0.01, 0.1};
  const auto res = integrate(ref, x0, v0, cfg, 'x');
  const auto acts = mode_actions(ref, res.trajectory);
  for (std::size_t j = 0; j < 2; ++j) {
    const auto e = acts.series(j);
    EXPECT_NEAR(e.front(), 0.5 * (v0[j] * v0[j] + ref.lambdas()[j] * x0[j] * x0[j]), 1e-15);
    EXPECT_LT(relative_drift(e), 1e-9);
  }
  Trajectory wrong = res.trajectory;
  wrong.coordinate = 'q';
  EXPECT_THROW(mode_actions(ref, wrong), InvalidArgument);
}

TEST(TimeReversal, SmallForBoundedMotion) {
  const auto red = build_reduced(5, 0.01, 1.0);
  IntegratorConfig cfg;
  cfg.t_end = 100.0;
  const std::vector<double> q0{0.1, 0.02, -0.05, 0.01}, v0{0.0, 0.0, 0.01, 0.0};
  EXPECT_LT(time_reversal_error(red, q0, v0, cfg), 1e-6);
}

TEST(Drift, RelativeToInitialEnergy) {
  EXPECT_DOUBLE_EQ(relative_drift(std::vector<double>{2.0, 2.1, 1.8}), 0.1);
  EXPECT_DOUBLE_EQ(relative_drift(std::vector<double>{5.0}), 0.0);
}

TEST(Momentum, SeriesOfFullChain) {
  const auto sys = build_chain({.n_pairs = 2, .a = 0.5});
  Trajectory tr;
  tr.dof = 4;
  tr.times = {0.0};
  tr.states = {{0, 0, 0, 0, 1.0, 1.0, 0.0, 0.0}};
  EXPECT_DOUBLE_EQ(momentum_series(sys, tr)[0], 1.0 + 2.0);
}

}  // namespace
}  // namespace fpu

namespace fpu {
namespace {

TEST(InvarianceLeak, AgreesWithAlgebraicVerdict) {
  IntegratorConfig cfg;
  cfg.t_end = 100.0;
  const auto p5 = read_system(test::data_path("reference/p5_quasi_harmonic.txt"));
  const std::vector<std::size_t> plane{0, 3};
  const auto leak = invariance_leak(p5, plane, 0.1, cfg);
  EXPECT_EQ(leak.status, IntegrationStatus::completed);
  EXPECT_GT(leak.max_frozen, 1e-3);

  const auto red = build_reduced(9, 0.01, 1.0);
  const auto p9 = to_quasi_harmonic(red, eigendecompose(red));
  const std::vector<std::size_t> fixed_pair{4, 5};
  const auto none = invariance_leak(p9, fixed_pair, 0.1, cfg);
  EXPECT_LT(none.max_frozen, 1e-12);
  EXPECT_GT(none.max_kept, 0.05);
  EXPECT_THROW(invariance_leak(p9, std::vector<std::size_t>{8}, 0.1, cfg), InvalidArgument);
}

}  // namespace
}  // namespace fpu
