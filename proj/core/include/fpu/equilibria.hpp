#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "fpu/reduction.hpp"
#include "fpu/spectral.hpp"

namespace fpu {

struct EquilibriumSearch {
  double box_halfwidth = 4.0;
  std::size_t grid_per_dim = 9;
  std::size_t max_iterations = 50;
  double step_tolerance = 1e-13;
  double residual_tolerance = 1e-12;
  double dedup_distance = 1e-8;
  std::size_t max_dimension = 6;
};

struct EquilibriumReport {
  std::vector<double> point;
  double residual = 0.0;
  /// Eigenvalues of the linearised first-order system (dimension 2 * dof),
  /// sorted by imaginary part then real part.
  std::vector<std::complex<double>> eigenvalues;
  std::size_t imaginary = 0;      // |Re| <= 1e-8 * max |mu|
  std::size_t positive_real = 0;  // Re > 0, Im ~ 0
  std::size_t negative_real = 0;  // Re < 0, Im ~ 0
  std::size_t complex = 0;        // genuinely complex (Krein quadruples)
};

/// Newton iteration on the static equations from every point of a uniform
/// grid; converged points are deduplicated and classified. The origin is
/// listed first, the rest in lexicographic order.
std::vector<EquilibriumReport> find_equilibria(const ReducedSystem& sys,
                                               const EquilibriumSearch& opts = {});
std::vector<EquilibriumReport> find_equilibria(const QuasiHarmonicSystem& sys,
                                               const EquilibriumSearch& opts = {});

/// Throws InvalidArgument when the static residual at `point` exceeds 1e-10.
EquilibriumReport classify_equilibrium(const ReducedSystem& sys, std::span<const double> point);
EquilibriumReport classify_equilibrium(const QuasiHarmonicSystem& sys, std::span<const double> point);

/// Eigenvalues of [[0, I], [A, 0]] from those of A: mu = +/- sqrt(nu).
std::vector<std::complex<double>> linearised_spectrum(const Matrix& accel_jacobian);

}  // namespace fpu
