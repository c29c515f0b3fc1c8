#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "fpu/chain.hpp"
#include "fpu/linalg.hpp"

namespace fpu {

/// One coefficient of a quadratic form: coeff * q_j * q_k (0-based, j <= k).
struct QuadraticTerm {
  std::size_t j = 0;
  std::size_t k = 0;
  double coeff = 0.0;
};

struct ReducedState {
  std::vector<double> q;
  std::vector<double> v;

  static ReducedState zero(std::size_t n) { return {std::vector<double>(n), std::vector<double>(n)}; }
};

/// The (p-1)-degree-of-freedom system left on the symmetric invariant
/// manifold of a 2p-particle chain:
///
///   M q'' + K q = alpha N(q),
///   N_i(q) = q_{i+1}^2 - 2 q_i q_{i+1} + 2 q_{i-1} q_i - q_{i-1}^2,
///
/// with virtual q_0 = q_p = 0. This is a fixed-end chain of p-1 particles,
/// so the right-hand side is exactly -grad U_red.
class ReducedSystem {
 public:
  ReducedSystem(std::size_t p, double a, double alpha);

  std::size_t p() const { return p_; }
  std::size_t dof() const { return p_ - 1; }
  double a() const { return a_; }
  double alpha() const { return alpha_; }

  std::span<const double> masses() const { return masses_; }
  const Matrix& stiffness() const { return stiffness_; }
  /// Row i of N in q-coordinates, alpha-free.
  std::span<const QuadraticTerm> quadratic_row(std::size_t i) const { return rows_[i]; }

  /// N(q) (alpha-free).
  std::vector<double> quadratic(std::span<const double> q) const;
  /// K q - alpha N(q); zero exactly at equilibria.
  std::vector<double> static_residual(std::span<const double> q) const;
  /// d(alpha N - K q)/dq, row-major.
  Matrix force_jacobian(std::span<const double> q) const;

  void accel(std::span<const double> q, std::span<double> out) const;
  std::vector<double> accel(std::span<const double> q) const;

  double potential_energy(std::span<const double> q) const;

 private:
  std::size_t p_;
  double a_;
  double alpha_;
  std::vector<double> masses_;
  Matrix stiffness_;
  std::vector<std::vector<QuadraticTerm>> rows_;
};

ReducedSystem build_reduced(std::size_t p, double a, double alpha);

double reduced_energy(const ReducedSystem& sys, const ReducedState& s);

/// Symmetric 2p-particle state: q_p = q_{2p} = 0, q_{2p-i} = -q_i.
FullState lift_symmetric(const ReducedState& s);

/// Largest violation of the symmetry relations by the full-chain
/// acceleration of the lifted state.
double symmetry_residual(const FullChainSystem& sys, const ReducedState& s);

}  // namespace fpu
