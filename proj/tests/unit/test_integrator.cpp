#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fpu/errors.hpp"
#include "fpu/integrator.hpp"
#include "fpu/spectral.hpp"

namespace fpu {
namespace {

struct Oscillator {
  double omega2 = 1.0;
  std::size_t dof() const { return 1; }
  void accel(std::span<const double> q, std::span<double> out) const { out[0] = -omega2 * q[0]; }
};

TEST(Integrator, HarmonicOscillatorFullPeriod) {
  IntegratorConfig cfg;
  cfg.t_end = 2.0 * std::numbers::pi;
  cfg.sample_dt = cfg.t_end;
  const std::vector<double> q0{1.0}, v0{0.0};
  const auto res = integrate(Oscillator{}, q0, v0, cfg, 'x');
  ASSERT_TRUE(res.ok());
  EXPECT_NEAR(res.trajectory.states.back()[0], 1.0, 1e-9);
  EXPECT_NEAR(res.trajectory.states.back()[1], 0.0, 1e-9);
  EXPECT_EQ(res.trajectory.coordinate, 'x');
}

TEST(Integrator, SamplesLandExactlyOnGrid) {
  IntegratorConfig cfg;
  cfg.t_end = 10.0;
  cfg.sample_dt = 0.25;
  const std::vector<double> q0{0.3}, v0{0.1};
  const auto res = integrate(Oscillator{4.0}, q0, v0, cfg);
  ASSERT_EQ(res.trajectory.size(), 41u);
  for (std::size_t k = 0; k < res.trajectory.size(); ++k) {
    const double t = res.trajectory.times[k];
    EXPECT_DOUBLE_EQ(t, 0.25 * double(k));
    const double exact = 0.3 * std::cos(2.0 * t) + 0.05 * std::sin(2.0 * t);
    EXPECT_NEAR(res.trajectory.positions(k)[0], exact, 1e-9);
  }
  EXPECT_EQ(res.trajectory.position_series(0).size(), 41u);
}

TEST(Integrator, FixedStepConvergesAtEighthOrder) {
  // y' = (y2, -y1) with exact rotation; global error over [0, 4].
  const FirstOrderRhs f = [](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
  };
  auto error = [&](int steps) {
    std::vector<double> y{1.0, 0.0};
    const double h = 4.0 / steps;
    for (int s = 0; s < steps; ++s) y = rk8_step(f, s * h, y, h);
    return std::hypot(y[0] - std::cos(4.0), y[1] + std::sin(4.0));
  };
  const double e1 = error(8), e2 = error(16);
  EXPECT_GT(e1 / e2, std::pow(2.0, 7.0));
}

TEST(Integrator, NonAutonomousRhsUsesTime) {
  const FirstOrderRhs f = [](double t, std::span<const double>, std::span<double> dy) { dy[0] = 3.0 * t * t; };
  IntegratorConfig cfg;
  cfg.t_end = 2.0;
  cfg.sample_dt = 2.0;
  const auto res = integrate_first_order(f, {0.0}, cfg, 1, 'q');
  ASSERT_TRUE(res.ok());
  EXPECT_NEAR(res.trajectory.states.back()[0], 8.0, 1e-12);
}

TEST(Integrator, BlowUpEndsWithDivergenceReport) {
  // y' = y^2 from y(0) = 1 blows up at t = 1.
  const FirstOrderRhs f = [](double, std::span<const double> y, std::span<double> dy) { dy[0] = y[0] * y[0]; };
  IntegratorConfig cfg;
  cfg.t_end = 5.0;
  cfg.sample_dt = 0.1;
  const auto res = integrate_first_order(f, {1.0}, cfg, 1, 'q');
  EXPECT_FALSE(res.ok());
  EXPECT_TRUE(res.status == IntegrationStatus::diverged || res.status == IntegrationStatus::step_underflow);
  EXPECT_LT(res.t_reached, 1.0);
  EXPECT_GT(res.t_reached, 0.99);
  EXPECT_FALSE(res.message.empty());
  EXPECT_LE(res.trajectory.times.back(), res.t_reached);
}

TEST(Integrator, ConfigValidation) {
  IntegratorConfig cfg;
  cfg.t_end = 1.0;
  EXPECT_NO_THROW(cfg.validate());
  auto bad = cfg;
  bad.abs_tol = 0.0;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = cfg;
  bad.rel_tol = 1e-3;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = cfg;
  bad.sample_dt = -1.0;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = cfg;
  bad.t_end = -1.0;
  EXPECT_THROW(bad.validate(), InvalidArgument);
}

TEST(Integrator, DimensionMismatchReported) {
  IntegratorConfig cfg;
  cfg.t_end = 1.0;
  const std::vector<double> q0{1.0, 2.0}, v0{0.0};
  EXPECT_THROW(integrate(Oscillator{}, q0, v0, cfg), DimensionMismatch);
}

TEST(Integrator, ZeroDurationReturnsInitialSample) {
  IntegratorConfig cfg;
  cfg.t_end = 0.0;
  const std::vector<double> q0{0.5}, v0{-0.5};
  const auto res = integrate(Oscillator{}, q0, v0, cfg);
  ASSERT_TRUE(res.ok());
  ASSERT_EQ(res.trajectory.size(), 1u);
  EXPECT_EQ(res.trajectory.states[0], (std::vector<double>{0.5, -0.5}));
}

TEST(Integrator, Deterministic) {
  const QuasiHarmonicSystem sys(0, 0.0, 1.0, {0.01, 1.0}, {}, {{0, 0, 1, 1.0}, {1, 0, 0, 0.5}});
  IntegratorConfig cfg;
  cfg.t_end = 50.0;
  const std::vector<double> q0{0.1, 0.1}, v0{0.0, 0.0};
  const auto a = integrate(sys, q0, v0, cfg, 'x');
  const auto b = integrate(sys, q0, v0, cfg, 'x');
  EXPECT_EQ(a.trajectory.states, b.trajectory.states);
  EXPECT_EQ(a.accepted_steps, b.accepted_steps);
}

}  // namespace
}  // namespace fpu
