#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "fpu/chain.hpp"
#include "fpu/integrator.hpp"
#include "fpu/reduction.hpp"
#include "fpu/spectral.hpp"

namespace fpu {

/// E_j(t) = (v_j^2 + lambda_j x_j^2) / 2 per sample.
struct ModeActionSeries {
  std::vector<double> times;
  std::vector<std::vector<double>> actions;  // actions[s][j]

  std::vector<double> series(std::size_t j) const;
};

/// Throws InvalidArgument unless the trajectory is in modal coordinates of
/// matching dimension.
ModeActionSeries mode_actions(const QuasiHarmonicSystem& sys, const Trajectory& tr);

/// Energy of every sample.
std::vector<double> energy_series(const FullChainSystem& sys, const Trajectory& tr);
std::vector<double> energy_series(const ReducedSystem& sys, const Trajectory& tr);
std::vector<double> energy_series(const QuasiHarmonicSystem& sys, const Trajectory& tr);

/// max_t |E(t) - E(0)| / max(|E(0)|, 1e-12).
double relative_drift(std::span<const double> energies);

template <class System>
double energy_drift(const System& sys, const Trajectory& tr) {
  return relative_drift(energy_series(sys, tr));
}

std::vector<double> momentum_series(const FullChainSystem& sys, const Trajectory& tr);

/// Integrates to t_end, reverses velocities, integrates back, and returns the
/// largest deviation from the initial state (velocities compared with sign
/// restored). Returns +inf when either leg fails.
template <SecondOrderSystem S>
double time_reversal_error(const S& sys, std::span<const double> q0, std::span<const double> v0,
                           IntegratorConfig cfg) {
  cfg.sample_dt = cfg.t_end > 0.0 ? cfg.t_end : 1.0;
  const auto forward = integrate(sys, q0, v0, cfg);
  if (!forward.ok()) return std::numeric_limits<double>::infinity();
  const std::size_t n = sys.dof();
  const auto end = forward.trajectory.states.back();
  std::vector<double> q(end.begin(), end.begin() + static_cast<std::ptrdiff_t>(n));
  std::vector<double> v(end.begin() + static_cast<std::ptrdiff_t>(n), end.end());
  for (double& x : v) x = -x;
  const auto back = integrate(sys, q, v, cfg);
  if (!back.ok()) return std::numeric_limits<double>::infinity();
  const auto& fin = back.trajectory.states.back();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(fin[i] - q0[i]));
    worst = std::max(worst, std::abs(-fin[n + i] - v0[i]));
  }
  return worst;
}

/// Numerical check of a candidate invariant plane: start with only the
/// `kept` modes displaced (by `amplitude`, velocities zero), integrate, and
/// record how far the other modes move away from zero.
struct InvarianceLeak {
  double max_frozen = 0.0;  // max over frozen modes and samples of |x_r|
  std::size_t worst_mode = 0;
  double max_kept = 0.0;
  IntegrationStatus status = IntegrationStatus::completed;
  double t_reached = 0.0;
};

InvarianceLeak invariance_leak(const QuasiHarmonicSystem& sys, std::span<const std::size_t> kept,
                               double amplitude, const IntegratorConfig& cfg);

/// Closed-form first-order response of a mode at rest driven through the
/// square of another mode oscillating as A cos(sqrt(lambda_driver) t):
///
///   x'' + lambda_d x = alpha c A^2 cos^2(w t),   x(0) = x'(0) = 0,
///
/// with c = C_{driven, driver driver} and w = sqrt(lambda_driver).
class FirstOrderResponse {
 public:
  FirstOrderResponse(double lambda_driven, double lambda_driver, double forcing_coefficient,
                     double amplitude, double alpha);

  double operator()(double t) const;
  double velocity(double t) const;

  double mean_offset() const { return constant_; }
  double oscillating_amplitude() const { return harmonic_; }

 private:
  double omega_driven_;
  double omega_forcing_;  // 2 w
  double constant_;       // particular solution, constant part
  double harmonic_;       // particular solution, cos(2 w t) part
};

FirstOrderResponse first_order_response(const QuasiHarmonicSystem& sys, std::size_t driven,
                                        std::size_t driver, double amplitude);

/// Cartoon systems with widely separated frequencies, as quasi-harmonic
/// systems with alpha = 1:
///   id 1: x'' + w1^2 x = x y,        y'' + w2^2 y = x^2 / 2
///   id 2: x'' + w1^2 x = 0.2 y z,
///         y'' + w2^2 y = 0.2 x z + 0.25 (z^2 + 2 y z),
///         z'' + w3^2 z = 0.2 x y + 0.25 (y^2 + 2 y z)
/// `omegas` holds 2 resp. 3 frequencies (not squared).
QuasiHarmonicSystem cartoon_system(int id, std::span<const double> omegas);

}  // namespace fpu
