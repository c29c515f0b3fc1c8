#include "fpu/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fpu/errors.hpp"

namespace fpu {

ReducedSystem::ReducedSystem(std::size_t p, double a, double alpha)
    : p_(p), a_(a), alpha_(alpha) {
  if (p < 3 || p % 2 == 0)
    throw InvalidArgument("reduced system needs odd p >= 3, got " + std::to_string(p));
  if (!(a > 0.0) || !std::isfinite(a))
    throw InvalidArgument("mass parameter a must be positive, got " + std::to_string(a));
  if (!std::isfinite(alpha)) throw InvalidArgument("alpha must be finite");

  const std::size_t n = p - 1;
  masses_.resize(n);
  for (std::size_t i = 0; i < n; ++i) masses_[i] = (i % 2 == 0) ? 1.0 : 1.0 / a;

  stiffness_ = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    stiffness_(i, i) = 2.0;
    if (i + 1 < n) {
      stiffness_(i, i + 1) = -1.0;
      stiffness_(i + 1, i) = -1.0;
    }
  }

  // Uniform row formula; terms touching q_0 or q_p are simply dropped.
  rows_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& row = rows_[i];
    const bool has_next = i + 1 < n;
    const bool has_prev = i > 0;
    if (has_next) {
      row.push_back({i + 1, i + 1, 1.0});
      row.push_back({i, i + 1, -2.0});
    }
    if (has_prev) {
      row.push_back({i - 1, i, 2.0});
      row.push_back({i - 1, i - 1, -1.0});
    }
  }
}

std::vector<double> ReducedSystem::quadratic(std::span<const double> q) const {
  if (q.size() != dof()) throw DimensionMismatch("reduced positions", dof(), q.size());
  std::vector<double> out(dof(), 0.0);
  for (std::size_t i = 0; i < dof(); ++i)
    for (const auto& t : rows_[i]) out[i] += t.coeff * q[t.j] * q[t.k];
  return out;
}

std::vector<double> ReducedSystem::static_residual(std::span<const double> q) const {
  auto nq = quadratic(q);
  const auto kq = multiply(stiffness_, q);
  for (std::size_t i = 0; i < dof(); ++i) nq[i] = kq[i] - alpha_ * nq[i];
  return nq;
}

Matrix ReducedSystem::force_jacobian(std::span<const double> q) const {
  if (q.size() != dof()) throw DimensionMismatch("reduced positions", dof(), q.size());
  const std::size_t n = dof();
  Matrix jac(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < n; ++c) jac(i, c) = -stiffness_(i, c);
    for (const auto& t : rows_[i]) {
      jac(i, t.j) += alpha_ * t.coeff * q[t.k];
      jac(i, t.k) += alpha_ * t.coeff * q[t.j];
    }
  }
  return jac;
}

void ReducedSystem::accel(std::span<const double> q, std::span<double> out) const {
  const std::size_t n = dof();
  if (q.size() != n) throw DimensionMismatch("reduced positions", n, q.size());
  if (out.size() != n) throw DimensionMismatch("reduced acceleration buffer", n, out.size());
  for (std::size_t i = 0; i < n; ++i) {
    double f = -2.0 * q[i];
    if (i > 0) f += q[i - 1];
    if (i + 1 < n) f += q[i + 1];
    double nl = 0.0;
    for (const auto& t : rows_[i]) nl += t.coeff * q[t.j] * q[t.k];
    out[i] = (f + alpha_ * nl) / masses_[i];
  }
}

std::vector<double> ReducedSystem::accel(std::span<const double> q) const {
  std::vector<double> out(dof());
  accel(q, out);
  return out;
}

double ReducedSystem::potential_energy(std::span<const double> q) const {
  const std::size_t n = dof();
  if (q.size() != n) throw DimensionMismatch("reduced positions", n, q.size());
  const Potential v{alpha_, 0.0};
  // Fixed-end chain: bonds (0,1), (1,2), ..., (p-1,p) with q_0 = q_p = 0.
  double u = v.value(q[0]) + v.value(-q[n - 1]);
  for (std::size_t i = 0; i + 1 < n; ++i) u += v.value(q[i + 1] - q[i]);
  return u;
}

ReducedSystem build_reduced(std::size_t p, double a, double alpha) {
  return ReducedSystem(p, a, alpha);
}

double reduced_energy(const ReducedSystem& sys, const ReducedState& s) {
  if (s.v.size() != sys.dof()) throw DimensionMismatch("reduced velocities", sys.dof(), s.v.size());
  double t = 0.0;
  const auto m = sys.masses();
  for (std::size_t i = 0; i < s.v.size(); ++i) t += 0.5 * m[i] * s.v[i] * s.v[i];
  return t + sys.potential_energy(s.q);
}

FullState lift_symmetric(const ReducedState& s) {
  if (s.q.size() != s.v.size()) throw DimensionMismatch("reduced velocities", s.q.size(), s.v.size());
  const std::size_t n = s.q.size();  // p - 1
  const std::size_t full = 2 * (n + 1);
  FullState out = FullState::zero(full);
  for (std::size_t i = 0; i < n; ++i) {
    // 1-based: q_i and q_{2p-i} = -q_i; 0-based indices i and full-2-i.
    out.q[i] = s.q[i];
    out.v[i] = s.v[i];
    out.q[full - 2 - i] = -s.q[i];
    out.v[full - 2 - i] = -s.v[i];
  }
  return out;
}

double symmetry_residual(const FullChainSystem& sys, const ReducedState& s) {
  const std::size_t n = s.q.size();
  if (sys.size() != 2 * (n + 1)) throw DimensionMismatch("symmetric lift of reduced state", sys.size(), 2 * (n + 1));
  const FullState lifted = lift_symmetric(s);
  const auto acc = sys.accel(lifted.q);
  const std::size_t full = sys.size();
  double worst = std::max(std::abs(acc[n]), std::abs(acc[full - 1]));
  for (std::size_t i = 0; i < n; ++i)
    worst = std::max(worst, std::abs(acc[i] + acc[full - 2 - i]));
  return worst;
}

}  // namespace fpu
