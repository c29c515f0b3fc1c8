#include "fpu/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fpu/errors.hpp"

namespace fpu {

std::vector<double> ModeActionSeries::series(std::size_t j) const {
  std::vector<double> out(actions.size());
  for (std::size_t s = 0; s < actions.size(); ++s) out[s] = actions[s][j];
  return out;
}

ModeActionSeries mode_actions(const QuasiHarmonicSystem& sys, const Trajectory& tr) {
  if (tr.coordinate != 'x')
    throw InvalidArgument("mode actions need a trajectory in normal-mode coordinates");
  if (tr.dof != sys.dof()) throw DimensionMismatch("trajectory modes", sys.dof(), tr.dof);
  ModeActionSeries out;
  out.times = tr.times;
  out.actions.reserve(tr.size());
  const auto lambdas = sys.lambdas();
  for (std::size_t s = 0; s < tr.size(); ++s) {
    const auto x = tr.positions(s);
    const auto v = tr.velocities(s);
    std::vector<double> e(sys.dof());
    for (std::size_t j = 0; j < sys.dof(); ++j) e[j] = 0.5 * (v[j] * v[j] + lambdas[j] * x[j] * x[j]);
    out.actions.push_back(std::move(e));
  }
  return out;
}

std::vector<double> energy_series(const FullChainSystem& sys, const Trajectory& tr) {
  if (tr.dof != sys.size()) throw DimensionMismatch("trajectory particles", sys.size(), tr.dof);
  std::vector<double> out(tr.size());
  for (std::size_t s = 0; s < tr.size(); ++s)
    out[s] = sys.kinetic_energy(tr.velocities(s)) + sys.potential_energy(tr.positions(s));
  return out;
}

std::vector<double> energy_series(const ReducedSystem& sys, const Trajectory& tr) {
  if (tr.dof != sys.dof()) throw DimensionMismatch("trajectory coordinates", sys.dof(), tr.dof);
  std::vector<double> out(tr.size());
  const auto m = sys.masses();
  for (std::size_t s = 0; s < tr.size(); ++s) {
    const auto v = tr.velocities(s);
    double t = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) t += 0.5 * m[i] * v[i] * v[i];
    out[s] = t + sys.potential_energy(tr.positions(s));
  }
  return out;
}

std::vector<double> energy_series(const QuasiHarmonicSystem& sys, const Trajectory& tr) {
  if (tr.dof != sys.dof()) throw DimensionMismatch("trajectory modes", sys.dof(), tr.dof);
  std::vector<double> out(tr.size());
  for (std::size_t s = 0; s < tr.size(); ++s) out[s] = sys.energy(tr.positions(s), tr.velocities(s));
  return out;
}

double relative_drift(std::span<const double> energies) {
  if (energies.empty()) return 0.0;
  const double e0 = energies.front();
  double worst = 0.0;
  for (double e : energies) worst = std::max(worst, std::abs(e - e0));
  return worst / std::max(std::abs(e0), 1e-12);
}

std::vector<double> momentum_series(const FullChainSystem& sys, const Trajectory& tr) {
  if (tr.dof != sys.size()) throw DimensionMismatch("trajectory particles", sys.size(), tr.dof);
  std::vector<double> out(tr.size());
  for (std::size_t s = 0; s < tr.size(); ++s) out[s] = sys.momentum(tr.velocities(s));
  return out;
}

InvarianceLeak invariance_leak(const QuasiHarmonicSystem& sys, std::span<const std::size_t> kept,
                               double amplitude, const IntegratorConfig& cfg) {
  const std::size_t n = sys.dof();
  std::vector<bool> is_kept(n, false);
  for (std::size_t m : kept) {
    if (m >= n) throw InvalidArgument("kept mode out of range");
    is_kept[m] = true;
  }
  std::vector<double> x0(n, 0.0), v0(n, 0.0);
  for (std::size_t m = 0; m < n; ++m)
    if (is_kept[m]) x0[m] = amplitude;
  const auto res = integrate(sys, x0, v0, cfg, 'x');
  InvarianceLeak leak;
  leak.status = res.status;
  leak.t_reached = res.t_reached;
  for (std::size_t s = 0; s < res.trajectory.size(); ++s) {
    const auto x = res.trajectory.positions(s);
    for (std::size_t m = 0; m < n; ++m) {
      const double v = std::abs(x[m]);
      if (is_kept[m]) {
        leak.max_kept = std::max(leak.max_kept, v);
      } else if (v > leak.max_frozen) {
        leak.max_frozen = v;
        leak.worst_mode = m;
      }
    }
  }
  return leak;
}

FirstOrderResponse::FirstOrderResponse(double lambda_driven, double lambda_driver,
                                       double forcing_coefficient, double amplitude, double alpha) {
  if (!(lambda_driven > 0.0) || !(lambda_driver > 0.0))
    throw InvalidArgument("first-order response needs positive eigenvalues");
  const double detuning = lambda_driven - 4.0 * lambda_driver;
  if (std::abs(detuning) <= 1e-12 * std::max(lambda_driven, 4.0 * lambda_driver))
    throw InvalidArgument("driven mode is in exact 2:1 resonance with the driver");
  omega_driven_ = std::sqrt(lambda_driven);
  omega_forcing_ = 2.0 * std::sqrt(lambda_driver);
  // alpha c A^2 cos^2(w t) = K/2 + K/2 cos(2 w t)
  const double k = alpha * forcing_coefficient * amplitude * amplitude;
  constant_ = 0.5 * k / lambda_driven;
  harmonic_ = 0.5 * k / detuning;
}

double FirstOrderResponse::operator()(double t) const {
  const double initial = constant_ + harmonic_;
  return constant_ + harmonic_ * std::cos(omega_forcing_ * t) - initial * std::cos(omega_driven_ * t);
}

double FirstOrderResponse::velocity(double t) const {
  const double initial = constant_ + harmonic_;
  return -harmonic_ * omega_forcing_ * std::sin(omega_forcing_ * t) +
         initial * omega_driven_ * std::sin(omega_driven_ * t);
}

FirstOrderResponse first_order_response(const QuasiHarmonicSystem& sys, std::size_t driven,
                                        std::size_t driver, double amplitude) {
  if (driven >= sys.dof() || driver >= sys.dof() || driven == driver)
    throw InvalidArgument("driven and driver must be distinct modes of the system");
  return FirstOrderResponse(sys.lambdas()[driven], sys.lambdas()[driver],
                            sys.coefficient(driven, driver, driver), amplitude, sys.alpha());
}

QuasiHarmonicSystem cartoon_system(int id, std::span<const double> omegas) {
  auto squares = [&](std::size_t count) {
    if (omegas.size() != count)
      throw InvalidArgument("cartoon " + std::to_string(id) + " needs " + std::to_string(count) +
                            " frequencies, got " + std::to_string(omegas.size()));
    std::vector<double> l(count);
    for (std::size_t i = 0; i < count; ++i) {
      if (!(omegas[i] > 0.0)) throw InvalidArgument("cartoon frequencies must be positive");
      l[i] = omegas[i] * omegas[i];
    }
    return l;
  };
  if (id == 1) {
    return QuasiHarmonicSystem(0, 0.0, 1.0, squares(2), {},
                               {{0, 0, 1, 1.0}, {1, 0, 0, 0.5}});
  }
  if (id == 2) {
    return QuasiHarmonicSystem(0, 0.0, 1.0, squares(3), {},
                               {{0, 1, 2, 0.2},
                                {1, 0, 2, 0.2}, {1, 2, 2, 0.25}, {1, 1, 2, 0.5},
                                {2, 0, 1, 0.2}, {2, 1, 1, 0.25}, {2, 1, 2, 0.5}});
  }
  throw InvalidArgument("unknown cartoon id " + std::to_string(id) + " (expected 1 or 2)");
}

}  // namespace fpu
