#pragma once

#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace fpu {

struct IntegratorConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double t_end = 0.0;
  double sample_dt = 1.0;
  double max_step = std::numeric_limits<double>::infinity();
  /// Integration stops with `diverged` once max |y_i| exceeds this.
  double divergence_norm = 1e8;
  std::size_t max_steps = 50'000'000;

  /// Throws InvalidArgument unless tolerances lie in (0, 1e-4], sample_dt > 0
  /// and t_end >= 0.
  void validate() const;
};

enum class IntegrationStatus { completed, step_underflow, diverged, max_steps };

const char* to_string(IntegrationStatus status);

/// Samples of a second-order system. Each state stores positions followed by
/// velocities, so states[s] has 2 * dof entries.
struct Trajectory {
  std::size_t dof = 0;
  char coordinate = 'q';  // 'q' for particle displacements, 'x' for normal modes
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  bool dense = false;  // samples come from exact landings, not interpolation

  std::size_t size() const { return times.size(); }
  std::span<const double> positions(std::size_t s) const { return {states[s].data(), dof}; }
  std::span<const double> velocities(std::size_t s) const { return {states[s].data() + dof, dof}; }
  /// Time series of one coordinate (0-based).
  std::vector<double> position_series(std::size_t i) const;
};

struct IntegrationResult {
  Trajectory trajectory;
  IntegrationStatus status = IntegrationStatus::completed;
  double t_reached = 0.0;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::string message;

  bool ok() const { return status == IntegrationStatus::completed; }
};

/// dy/dt = f(t, y).
using FirstOrderRhs = std::function<void(double, std::span<const double>, std::span<double>)>;

/// Embedded 13-stage Runge-Kutta pair of orders 8 and 7 (Fehlberg's RK7(8)
/// coefficients, advanced with the order-8 solution) under a PI step-size
/// controller. Output lands exactly on multiples of sample_dt.
IntegrationResult integrate_first_order(const FirstOrderRhs& f, std::vector<double> y0,
                                        const IntegratorConfig& cfg, std::size_t dof,
                                        char coordinate);

/// One order-8 step of fixed size h. Exposed for convergence-order tests.
std::vector<double> rk8_step(const FirstOrderRhs& f, double t, std::span<const double> y, double h);

[[noreturn]] void throw_state_dimension(std::size_t dof, std::size_t q_size, std::size_t v_size);

/// Anything with a dof() and an acceleration q'' = a(q).
template <class S>
concept SecondOrderSystem = requires(const S& s, std::span<const double> q, std::span<double> out) {
  { s.dof() } -> std::convertible_to<std::size_t>;
  s.accel(q, out);
};

template <SecondOrderSystem S>
FirstOrderRhs first_order_rhs(const S& sys) {
  const std::size_t n = sys.dof();
  return [&sys, n](double, std::span<const double> y, std::span<double> dy) {
    for (std::size_t i = 0; i < n; ++i) dy[i] = y[n + i];
    sys.accel(y.first(n), dy.subspan(n, n));
  };
}

template <SecondOrderSystem S>
IntegrationResult integrate(const S& sys, std::span<const double> q0, std::span<const double> v0,
                            const IntegratorConfig& cfg, char coordinate = 'q') {
  const std::size_t n = sys.dof();
  std::vector<double> y(2 * n);
  if (q0.size() != n || v0.size() != n) throw_state_dimension(n, q0.size(), v0.size());
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = q0[i];
    y[n + i] = v0[i];
  }
  return integrate_first_order(first_order_rhs(sys), std::move(y), cfg, n, coordinate);
}

}  // namespace fpu
