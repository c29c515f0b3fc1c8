#include "fpu/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "fpu/errors.hpp"

namespace fpu {

namespace {

constexpr int kStages = 13;

// Fehlberg RK7(8) tableau.
constexpr std::array<double, kStages> kC = {
    0.0, 2.0 / 27, 1.0 / 9, 1.0 / 6, 5.0 / 12, 1.0 / 2, 5.0 / 6,
    1.0 / 6, 2.0 / 3, 1.0 / 3, 1.0, 0.0, 1.0};

constexpr double kA[kStages][kStages - 1] = {
    {},
    {2.0 / 27},
    {1.0 / 36, 1.0 / 12},
    {1.0 / 24, 0.0, 1.0 / 8},
    {5.0 / 12, 0.0, -25.0 / 16, 25.0 / 16},
    {1.0 / 20, 0.0, 0.0, 1.0 / 4, 1.0 / 5},
    {-25.0 / 108, 0.0, 0.0, 125.0 / 108, -65.0 / 27, 125.0 / 54},
    {31.0 / 300, 0.0, 0.0, 0.0, 61.0 / 225, -2.0 / 9, 13.0 / 900},
    {2.0, 0.0, 0.0, -53.0 / 6, 704.0 / 45, -107.0 / 9, 67.0 / 90, 3.0},
    {-91.0 / 108, 0.0, 0.0, 23.0 / 108, -976.0 / 135, 311.0 / 54, -19.0 / 60, 17.0 / 6,
     -1.0 / 12},
    {2383.0 / 4100, 0.0, 0.0, -341.0 / 164, 4496.0 / 1025, -301.0 / 82, 2133.0 / 4100,
     45.0 / 82, 45.0 / 164, 18.0 / 41},
    {3.0 / 205, 0.0, 0.0, 0.0, 0.0, -6.0 / 41, -3.0 / 205, -3.0 / 41, 3.0 / 41, 6.0 / 41, 0.0},
    {-1777.0 / 4100, 0.0, 0.0, -341.0 / 164, 4496.0 / 1025, -289.0 / 82, 2193.0 / 4100,
     51.0 / 82, 33.0 / 164, 12.0 / 41, 0.0, 1.0},
};

// Order-8 weights; the order-7 solution differs only in stages 0, 10, 11, 12.
constexpr std::array<double, kStages> kB8 = {
    0.0, 0.0, 0.0, 0.0, 0.0, 34.0 / 105, 9.0 / 35, 9.0 / 35, 9.0 / 280, 9.0 / 280, 0.0,
    41.0 / 840, 41.0 / 840};
constexpr double kErr = 41.0 / 840;  // b8 - b7 = kErr * (-k0 - k10 + k11 + k12)

struct StepWork {
  std::array<std::vector<double>, kStages> k;
  std::vector<double> stage;
  std::vector<double> y_new;
  std::vector<double> err;

  explicit StepWork(std::size_t n) : stage(n), y_new(n), err(n) {
    for (auto& v : k) v.assign(n, 0.0);
  }
};

// k[0] must already hold f(t, y).
void take_step(const FirstOrderRhs& f, double t, std::span<const double> y, double h,
               StepWork& w) {
  const std::size_t n = y.size();
  for (int s = 1; s < kStages; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int r = 0; r < s; ++r) acc += kA[s][r] * w.k[r][i];
      w.stage[i] = y[i] + h * acc;
    }
    f(t + kC[s] * h, w.stage, w.k[s]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int s = 0; s < kStages; ++s) acc += kB8[s] * w.k[s][i];
    w.y_new[i] = y[i] + h * acc;
    w.err[i] = h * kErr * (w.k[11][i] + w.k[12][i] - w.k[0][i] - w.k[10][i]);
  }
}

double error_norm(std::span<const double> y, std::span<const double> y_new,
                  std::span<const double> err, const IntegratorConfig& cfg) {
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
    const double r = err[i] / scale;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(y.size()));
}

double initial_step(const FirstOrderRhs& f, double t, std::span<const double> y,
                    std::span<const double> f0, const IntegratorConfig& cfg) {
  const std::size_t n = y.size();
  double d0 = 0.0, d1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sc = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
    d0 += (y[i] / sc) * (y[i] / sc);
    d1 += (f0[i] / sc) * (f0[i] / sc);
  }
  d0 = std::sqrt(d0 / n);
  d1 = std::sqrt(d1 / n);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  std::vector<double> y1(n), f1(n);
  for (std::size_t i = 0; i < n; ++i) y1[i] = y[i] + h0 * f0[i];
  f(t + h0, y1, f1);
  double d2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sc = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
    const double diff = (f1[i] - f0[i]) / sc;
    d2 += diff * diff;
  }
  d2 = std::sqrt(d2 / n) / h0;
  const double big = std::max(d1, d2);
  const double h1 = big <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / big, 1.0 / 8.0);
  return std::min({100.0 * h0, h1, cfg.max_step});
}

bool finite_and_bounded(std::span<const double> y, double limit, double& norm) {
  norm = 0.0;
  for (double v : y) {
    if (!std::isfinite(v)) {
      norm = std::numeric_limits<double>::infinity();
      return false;
    }
    norm = std::max(norm, std::abs(v));
  }
  return norm <= limit;
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(abs_tol > 0.0 && abs_tol <= 1e-4) || !(rel_tol > 0.0 && rel_tol <= 1e-4))
    throw InvalidArgument("integrator tolerances must lie in (0, 1e-4]");
  if (!(sample_dt > 0.0) || !std::isfinite(sample_dt))
    throw InvalidArgument("sample_dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw InvalidArgument("t_end must be finite and >= 0");
  if (!(max_step > 0.0)) throw InvalidArgument("max_step must be positive");
  if (!(divergence_norm > 0.0)) throw InvalidArgument("divergence_norm must be positive");
}

const char* to_string(IntegrationStatus status) {
  switch (status) {
    case IntegrationStatus::completed: return "completed";
    case IntegrationStatus::step_underflow: return "step_underflow";
    case IntegrationStatus::diverged: return "diverged";
    case IntegrationStatus::max_steps: return "max_steps";
  }
  return "unknown";
}

std::vector<double> Trajectory::position_series(std::size_t i) const {
  std::vector<double> out(states.size());
  for (std::size_t s = 0; s < states.size(); ++s) out[s] = states[s][i];
  return out;
}

void throw_state_dimension(std::size_t dof, std::size_t q_size, std::size_t v_size) {
  throw DimensionMismatch("initial state", dof, q_size != dof ? q_size : v_size);
}

std::vector<double> rk8_step(const FirstOrderRhs& f, double t, std::span<const double> y, double h) {
  StepWork w(y.size());
  f(t, y, w.k[0]);
  take_step(f, t, y, h, w);
  return w.y_new;
}

IntegrationResult integrate_first_order(const FirstOrderRhs& f, std::vector<double> y0,
                                        const IntegratorConfig& cfg, std::size_t dof,
                                        char coordinate) {
  cfg.validate();
  const std::size_t n = y0.size();
  IntegrationResult result;
  auto& traj = result.trajectory;
  traj.dof = dof;
  traj.coordinate = coordinate;

  double t = 0.0;
  std::vector<double> y = std::move(y0);
  traj.times.push_back(0.0);
  traj.states.push_back(y);
  double norm = 0.0;
  if (!finite_and_bounded(y, cfg.divergence_norm, norm)) {
    result.status = IntegrationStatus::diverged;
    result.message = "initial state norm " + std::to_string(norm) + " exceeds the divergence bound";
    return result;
  }
  if (cfg.t_end == 0.0) {
    result.t_reached = 0.0;
    return result;
  }

  StepWork w(n);
  f(t, y, w.k[0]);
  double h = initial_step(f, t, y, w.k[0], cfg);
  double prev_err = 1e-4;
  std::size_t sample_index = 1;
  auto sample_time = [&](std::size_t k) { return std::min(cfg.t_end, static_cast<double>(k) * cfg.sample_dt); };

  while (t < cfg.t_end) {
    if (result.accepted_steps + result.rejected_steps >= cfg.max_steps) {
      result.status = IntegrationStatus::max_steps;
      result.message = "step budget exhausted at t = " + std::to_string(t);
      break;
    }
    const double target = sample_time(sample_index);
    const bool clipped = t + h >= target;
    const double step = clipped ? target - t : h;
    if (step < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)) &&
        !clipped) {
      result.status = IntegrationStatus::step_underflow;
      result.message = "step size underflow at t = " + std::to_string(t);
      break;
    }

    take_step(f, t, y, step, w);
    double err = error_norm(y, w.y_new, w.err, cfg);
    if (!std::isfinite(err)) err = 1e10;

    if (err <= 1.0) {
      const double t_new = clipped ? target : t + step;
      y.swap(w.y_new);
      t = t_new;
      ++result.accepted_steps;
      if (!finite_and_bounded(y, cfg.divergence_norm, norm)) {
        result.status = IntegrationStatus::diverged;
        result.message = "state norm " + std::to_string(norm) + " exceeded " +
                         std::to_string(cfg.divergence_norm) + " at t = " + std::to_string(t);
        traj.times.push_back(t);
        traj.states.push_back(y);
        break;
      }
      if (clipped) {
        traj.times.push_back(t);
        traj.states.push_back(y);
        ++sample_index;
      }
      f(t, y, w.k[0]);
      // PI controller, exponents 0.7/8 and 0.4/8.
      const double e = std::max(err, 1e-10);
      double factor = 0.9 * std::pow(e, -0.7 / 8.0) * std::pow(prev_err, 0.4 / 8.0);
      factor = std::clamp(factor, 0.2, 5.0);
      prev_err = e;
      // A step shortened to hit a sample time keeps the unclipped proposal.
      const double proposal = clipped ? h * std::min(factor, 1.0) : step * factor;
      h = std::min(proposal, cfg.max_step);
    } else {
      ++result.rejected_steps;
      const double factor = std::max(0.2, 0.9 * std::pow(err, -1.0 / 8.0));
      h = step * factor;
      if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
        result.status = IntegrationStatus::step_underflow;
        result.message = "step size underflow at t = " + std::to_string(t);
        break;
      }
    }
  }
  result.t_reached = t;
  return result;
}

}  // namespace fpu
