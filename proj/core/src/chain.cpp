#include "fpu/chain.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "fpu/errors.hpp"
#include "fpu/linalg.hpp"

namespace fpu {

void validate(const ChainParams& params) {
  if (!(params.a > 0.0) || !std::isfinite(params.a))
    throw InvalidArgument("chain mass parameter a must be positive, got " +
                          std::to_string(params.a));
  if (params.n_pairs < 2)
    throw InvalidArgument("chain needs at least 2 particle pairs, got " +
                          std::to_string(params.n_pairs));
  if (!std::isfinite(params.alpha) || !std::isfinite(params.beta))
    throw InvalidArgument("chain nonlinearity coefficients must be finite");
}

FullChainSystem::FullChainSystem(const ChainParams& params)
    : params_(params), potential_{params.alpha, params.beta} {
  validate(params);
  const std::size_t n = 2 * params.n_pairs;
  masses_.resize(n);
  // Particle j (1-based) has mass 1 when j is odd, 1/a when j is even.
  for (std::size_t i = 0; i < n; ++i) masses_[i] = (i % 2 == 0) ? 1.0 : 1.0 / params.a;
}

void FullChainSystem::accel(std::span<const double> q, std::span<double> out) const {
  const std::size_t n = size();
  if (q.size() != n) throw DimensionMismatch("full chain positions", n, q.size());
  if (out.size() != n) throw DimensionMismatch("full chain acceleration buffer", n, out.size());
  // Force of bond (j, j+1) on particle j is +V'(q_{j+1}-q_j), on j+1 it is -V'.
  double left = potential_.derivative(q[0] - q[n - 1]);
  for (std::size_t j = 0; j < n; ++j) {
    const double right = potential_.derivative(q[(j + 1) % n] - q[j]);
    out[j] = (right - left) / masses_[j];
    left = right;
  }
}

std::vector<double> FullChainSystem::accel(std::span<const double> q) const {
  std::vector<double> out(size());
  accel(q, out);
  return out;
}

double FullChainSystem::potential_energy(std::span<const double> q) const {
  const std::size_t n = size();
  if (q.size() != n) throw DimensionMismatch("full chain positions", n, q.size());
  double u = 0.0;
  for (std::size_t j = 0; j < n; ++j) u += potential_.value(q[(j + 1) % n] - q[j]);
  return u;
}

double FullChainSystem::kinetic_energy(std::span<const double> v) const {
  if (v.size() != size()) throw DimensionMismatch("full chain velocities", size(), v.size());
  double t = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) t += 0.5 * masses_[j] * v[j] * v[j];
  return t;
}

double FullChainSystem::momentum(std::span<const double> v) const {
  if (v.size() != size()) throw DimensionMismatch("full chain velocities", size(), v.size());
  double p = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) p += masses_[j] * v[j];
  return p;
}

FullChainSystem build_chain(const ChainParams& params) { return FullChainSystem(params); }

std::vector<double> eval_accel_full(const FullChainSystem& sys, const FullState& s) {
  if (s.v.size() != sys.size()) throw DimensionMismatch("full chain velocities", sys.size(), s.v.size());
  return sys.accel(s.q);
}

double hamiltonian(const FullChainSystem& sys, const FullState& s) {
  return sys.kinetic_energy(s.v) + sys.potential_energy(s.q);
}

double total_momentum(const FullChainSystem& sys, const FullState& s) {
  return sys.momentum(s.v);
}

std::vector<double> linear_spectrum_full(const FullChainSystem& sys) {
  const std::size_t n = sys.size();
  const auto m = sys.masses();
  // M^{-1/2} K M^{-1/2} with K the periodic second-difference stiffness.
  Matrix s(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t next = (i + 1) % n;
    const std::size_t prev = (i + n - 1) % n;
    s(i, i) += 2.0 / m[i];
    s(i, next) -= 1.0 / std::sqrt(m[i] * m[next]);
    s(i, prev) -= 1.0 / std::sqrt(m[i] * m[prev]);
  }
  auto values = jacobi_eigen(s).values;
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

FullState embed_state(const FullState& s, std::size_t k) {
  if (k == 0) throw InvalidArgument("embedding factor must be positive");
  if (s.q.size() != s.v.size()) throw DimensionMismatch("state velocities", s.q.size(), s.v.size());
  FullState out;
  out.q.reserve(s.q.size() * k);
  out.v.reserve(s.v.size() * k);
  for (std::size_t r = 0; r < k; ++r) {
    out.q.insert(out.q.end(), s.q.begin(), s.q.end());
    out.v.insert(out.v.end(), s.v.begin(), s.v.end());
  }
  return out;
}

FullState restrict_state(const FullState& s, std::size_t n) {
  if (n > s.q.size()) throw DimensionMismatch("restriction length", s.q.size(), n);
  return {std::vector<double>(s.q.begin(), s.q.begin() + static_cast<std::ptrdiff_t>(n)),
          std::vector<double>(s.v.begin(), s.v.begin() + static_cast<std::ptrdiff_t>(n))};
}

}  // namespace fpu
