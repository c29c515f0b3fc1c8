#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fpu {

/// Nearest-neighbour potential V(z) = z^2/2 + alpha z^3/3 + beta z^4/4.
struct Potential {
  double alpha = 0.0;
  double beta = 0.0;

  double value(double z) const {
    const double z2 = z * z;
    return 0.5 * z2 + alpha * z2 * z / 3.0 + beta * z2 * z2 / 4.0;
  }
  double derivative(double z) const {
    const double z2 = z * z;
    return z + alpha * z2 + beta * z2 * z;
  }
  double second_derivative(double z) const {
    return 1.0 + 2.0 * alpha * z + 3.0 * beta * z * z;
  }
};

/// Problem definition for a periodic chain of 2*n_pairs particles whose
/// masses alternate 1 (odd particles) and 1/a (even particles).
struct ChainParams {
  std::size_t n_pairs = 2;
  double a = 0.01;
  double alpha = 1.0;
  double beta = 0.0;
};

/// Throws InvalidArgument unless a > 0 and n_pairs >= 2.
void validate(const ChainParams& params);

/// Positions and velocities of every particle (0-based storage).
struct FullState {
  std::vector<double> q;
  std::vector<double> v;

  static FullState zero(std::size_t n) { return {std::vector<double>(n), std::vector<double>(n)}; }
  std::size_t size() const { return q.size(); }
};

/// Periodic alternating-mass FPU chain. Immutable after construction.
class FullChainSystem {
 public:
  explicit FullChainSystem(const ChainParams& params);

  const ChainParams& params() const { return params_; }
  const Potential& potential() const { return potential_; }
  std::size_t size() const { return masses_.size(); }
  std::size_t dof() const { return masses_.size(); }
  std::span<const double> masses() const { return masses_; }

  /// q'' from m_j q_j'' = V'(q_{j+1} - q_j) - V'(q_j - q_{j-1}), periodic.
  void accel(std::span<const double> q, std::span<double> out) const;
  std::vector<double> accel(std::span<const double> q) const;

  double potential_energy(std::span<const double> q) const;
  double kinetic_energy(std::span<const double> v) const;
  double momentum(std::span<const double> v) const;

 private:
  ChainParams params_;
  Potential potential_;
  std::vector<double> masses_;
};

FullChainSystem build_chain(const ChainParams& params);

std::vector<double> eval_accel_full(const FullChainSystem& sys, const FullState& s);
double hamiltonian(const FullChainSystem& sys, const FullState& s);
double total_momentum(const FullChainSystem& sys, const FullState& s);

/// Eigenvalues (squared frequencies) of the linearisation about the origin,
/// sorted descending. Includes the zero eigenvalue of uniform translation.
std::vector<double> linear_spectrum_full(const FullChainSystem& sys);

/// Repeats the particle pattern k times, giving a state of a k-times longer
/// chain whose evolution stays periodic with the original period.
FullState embed_state(const FullState& s, std::size_t k);

/// Inverse of embed_state on one period: the first `n` particles.
FullState restrict_state(const FullState& s, std::size_t n);

}  // namespace fpu
