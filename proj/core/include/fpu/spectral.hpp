#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fpu/linalg.hpp"
#include "fpu/reduction.hpp"

namespace fpu {

enum class ModeKind { acoustic, optical, other };

const char* to_string(ModeKind kind);
ModeKind parse_mode_kind(const std::string& text);

/// Tag of one normal mode. `pair` is the 1-based pair index j; 0 when the
/// mode does not come from a pair matrix (cartoon systems).
struct ModeLabel {
  ModeKind kind = ModeKind::other;
  std::size_t pair = 0;

  friend bool operator==(const ModeLabel&, const ModeLabel&) = default;
};

/// Eigenvalues of [[2a, 2a cos(pi j/p)], [2 cos(pi j/p), 2]]:
/// (1+a) -/+ sqrt((1+a)^2 - 4a sin^2(pi j/p)). First is acoustic.
std::pair<double, double> pair_eigenvalues(double a, std::size_t p, std::size_t j);

/// Normal modes of a reduced system in pair order
/// (acoustic of pair 1, optical of pair 1, acoustic of pair 2, ...).
/// q = T x; T is M-orthonormal (T^T M T = I).
struct ModalBasis {
  std::vector<double> lambdas;
  Matrix transform;          // T, columns are eigenvectors
  Matrix inverse_transform;  // T^{-1} = T^T M
  std::vector<ModeLabel> labels;

  std::vector<double> to_modal(std::span<const double> q) const;
  std::vector<double> from_modal(std::span<const double> x) const;
};

ModalBasis eigendecompose(const ReducedSystem& sys);

/// One stored coefficient of the quasi-harmonic tensor: the term
/// value * x_j * x_k in the equation of mode i (0-based, j <= k).
struct TensorEntry {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;
  double value = 0.0;
};

/// x_i'' + lambda_i x_i = alpha * sum_{j<=k} C_{i,jk} x_j x_k.
///
/// `weights` are the diagonal kinetic weights w_i of the conserved energy
///   E = sum_i w_i (v_i^2 + lambda_i x_i^2)/2 - alpha/3 sum_i w_i x_i C_i(x,x).
/// They are 1 for M-orthonormal coordinates and s_i^2 after rescaling x_i = s_i y_i.
/// `p` is 0 for systems not derived from a chain.
class QuasiHarmonicSystem {
 public:
  QuasiHarmonicSystem() = default;
  QuasiHarmonicSystem(std::size_t p, double a, double alpha, std::vector<double> lambdas,
                      std::vector<ModeLabel> labels, std::vector<TensorEntry> entries,
                      std::vector<double> weights = {});

  std::size_t p() const { return p_; }
  double a() const { return a_; }
  double alpha() const { return alpha_; }
  std::size_t dof() const { return lambdas_.size(); }

  std::span<const double> lambdas() const { return lambdas_; }
  std::span<const ModeLabel> labels() const { return labels_; }
  std::span<const TensorEntry> entries() const { return entries_; }
  std::span<const double> weights() const { return weights_; }

  /// Coefficient of x_j x_k in equation i; 0 when not stored.
  double coefficient(std::size_t i, std::size_t j, std::size_t k) const;
  double max_abs_coefficient() const;

  /// C(x, x), alpha-free.
  std::vector<double> quadratic(std::span<const double> x) const;
  /// d/dx of (-Lambda x + alpha C(x,x)).
  Matrix force_jacobian(std::span<const double> x) const;
  /// Lambda x - alpha C(x,x); zero at equilibria.
  std::vector<double> static_residual(std::span<const double> x) const;

  void accel(std::span<const double> x, std::span<double> out) const;
  std::vector<double> accel(std::span<const double> x) const;

  double energy(std::span<const double> x, std::span<const double> v) const;

  /// Same system with a different nonlinearity coefficient.
  QuasiHarmonicSystem with_alpha(double alpha) const;

 private:
  std::size_t p_ = 0;
  double a_ = 0.0;
  double alpha_ = 1.0;
  std::vector<double> lambdas_;
  std::vector<ModeLabel> labels_;
  std::vector<TensorEntry> entries_;  // sorted by (i, j, k)
  std::vector<double> weights_;
  std::vector<std::size_t> row_begin_;  // entries_ offsets per equation
};

/// Coefficients below this fraction of the largest magnitude are treated as
/// round-off and dropped.
inline constexpr double kTensorDropTolerance = 1e-12;

/// Pulls the q-space quadratic back through q = T x and premultiplies by
/// T^{-1} M^{-1}, giving the symmetrised tensor C.
QuasiHarmonicSystem to_quasi_harmonic(const ReducedSystem& sys, const ModalBasis& basis);

/// -Lambda x + alpha C(x,x) with an explicit alpha.
std::vector<double> eval_qh_rhs(const QuasiHarmonicSystem& sys, std::span<const double> x,
                                double alpha);

/// Change of variables x_i = s_i y_i (s_i may be negative).
QuasiHarmonicSystem rescale(const QuasiHarmonicSystem& sys, std::span<const double> s);

/// Reorders modes: new mode r is old mode order[r].
QuasiHarmonicSystem permute(const QuasiHarmonicSystem& sys, std::span<const std::size_t> order);

}  // namespace fpu
