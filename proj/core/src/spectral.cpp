#include "fpu/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <tuple>

#include "fpu/errors.hpp"

namespace fpu {

const char* to_string(ModeKind kind) {
  switch (kind) {
    case ModeKind::acoustic: return "acoustic";
    case ModeKind::optical: return "optical";
    case ModeKind::other: return "mode";
  }
  return "mode";
}

ModeKind parse_mode_kind(const std::string& text) {
  if (text == "acoustic") return ModeKind::acoustic;
  if (text == "optical") return ModeKind::optical;
  if (text == "mode") return ModeKind::other;
  throw InvalidArgument("unknown mode label '" + text + "'");
}

std::pair<double, double> pair_eigenvalues(double a, std::size_t p, std::size_t j) {
  if (p < 3 || j < 1 || 2 * j > p - 1)
    throw InvalidArgument("pair index " + std::to_string(j) + " out of range for p = " +
                          std::to_string(p));
  const double s = std::sin(std::numbers::pi * static_cast<double>(j) / static_cast<double>(p));
  const double mean = 1.0 + a;
  const double root = std::sqrt(mean * mean - 4.0 * a * s * s);
  // The small root by cancellation-free product: lo * hi = 4 a sin^2.
  const double hi = mean + root;
  const double lo = 4.0 * a * s * s / hi;
  return {lo, hi};
}

std::vector<double> ModalBasis::to_modal(std::span<const double> q) const {
  return multiply(inverse_transform, q);
}

std::vector<double> ModalBasis::from_modal(std::span<const double> x) const {
  return multiply(transform, x);
}

ModalBasis eigendecompose(const ReducedSystem& sys) {
  const std::size_t n = sys.dof();
  const std::size_t p = sys.p();
  const double a = sys.a();
  const auto m = sys.masses();
  const Matrix& k = sys.stiffness();

  std::vector<double> inv_sqrt_m(n), sqrt_m(n);
  for (std::size_t i = 0; i < n; ++i) {
    sqrt_m[i] = std::sqrt(m[i]);
    inv_sqrt_m[i] = 1.0 / sqrt_m[i];
  }
  Matrix s(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < n; ++c) s(i, c) = inv_sqrt_m[i] * k(i, c) * inv_sqrt_m[c];

  // Rotate into the sublattice sine basis first: u = (2/sqrt(p)) sin(pi j r / p)
  // restricted to odd or to even sites spans the pair-j eigenspace exactly,
  // so S becomes 2x2 block diagonal up to round-off. Jacobi then only rotates
  // within pairs and never mixes the nearly degenerate optical modes.
  Matrix u(n, n);
  const double norm = 2.0 / std::sqrt(static_cast<double>(p));
  for (std::size_t j = 1; 2 * j <= n; ++j)
    for (std::size_t r = 1; r <= n; ++r) {
      const double v = norm * std::sin(std::numbers::pi * static_cast<double>(j * r % (2 * p)) /
                                       static_cast<double>(p));
      u(r - 1, (r % 2 == 1) ? 2 * j - 2 : 2 * j - 1) = v;
    }
  const Matrix s_pairs = u.transposed() * s * u;
  SymmetricEigen eig = jacobi_eigen(s_pairs, 1e-13);
  eig.vectors = u * eig.vectors;

  // Analytic targets in pair order.
  std::vector<double> targets(n);
  std::vector<ModeLabel> labels(n);
  for (std::size_t j = 1; 2 * j <= n; ++j) {
    const auto [lo, hi] = pair_eigenvalues(a, p, j);
    targets[2 * j - 2] = lo;
    targets[2 * j - 1] = hi;
    labels[2 * j - 2] = {ModeKind::acoustic, j};
    labels[2 * j - 1] = {ModeKind::optical, j};
  }
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r + 1; c < n; ++c)
      if (std::abs(targets[r] - targets[c]) <= 1e-9)
        throw DegenerateSpectrum("eigenvalues of modes " + std::to_string(r + 1) + " and " +
                                 std::to_string(c + 1) + " coincide within 1e-9 (a = " +
                                 std::to_string(a) + ")");

  std::vector<std::size_t> slot_of(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t best = n;
    double best_gap = 1e-9;
    for (std::size_t r = 0; r < n; ++r) {
      const double gap = std::abs(eig.values[c] - targets[r]);
      if (gap <= best_gap) {
        best_gap = gap;
        best = r;
      }
    }
    if (best == n || slot_of[best] != n)
      throw DegenerateSpectrum("computed eigenvalue " + std::to_string(eig.values[c]) +
                               " does not match a unique pair eigenvalue within 1e-9");
    slot_of[best] = c;
  }

  ModalBasis basis;
  basis.lambdas.resize(n);
  basis.labels = labels;
  basis.transform = Matrix(n, n);
  basis.inverse_transform = Matrix(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t c = slot_of[r];
    basis.lambdas[r] = eig.values[c];
    // Sign: the entry of T with the largest magnitude is positive.
    // Entries tied in magnitude (common when gcd(j, p) > 1) go to the lowest
    // index, so the choice does not depend on round-off.
    double big = 0.0;
    for (std::size_t i = 0; i < n; ++i) big = std::max(big, std::abs(inv_sqrt_m[i] * eig.vectors(i, c)));
    double sign = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = inv_sqrt_m[i] * eig.vectors(i, c);
      if (std::abs(t) >= big * (1.0 - 1e-9)) {
        sign = t < 0.0 ? -1.0 : 1.0;
        break;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double u = sign * eig.vectors(i, c);
      basis.transform(i, r) = inv_sqrt_m[i] * u;
      basis.inverse_transform(r, i) = u * sqrt_m[i];
    }
  }
  return basis;
}

QuasiHarmonicSystem::QuasiHarmonicSystem(std::size_t p, double a, double alpha,
                                         std::vector<double> lambdas,
                                         std::vector<ModeLabel> labels,
                                         std::vector<TensorEntry> entries,
                                         std::vector<double> weights)
    : p_(p),
      a_(a),
      alpha_(alpha),
      lambdas_(std::move(lambdas)),
      labels_(std::move(labels)),
      entries_(std::move(entries)),
      weights_(std::move(weights)) {
  const std::size_t n = lambdas_.size();
  if (labels_.empty()) labels_.assign(n, ModeLabel{});
  if (weights_.empty()) weights_.assign(n, 1.0);
  if (labels_.size() != n) throw DimensionMismatch("mode labels", n, labels_.size());
  if (weights_.size() != n) throw DimensionMismatch("mode weights", n, weights_.size());
  for (auto& e : entries_) {
    if (e.j > e.k) std::swap(e.j, e.k);
    if (e.i >= n || e.k >= n)
      throw InvalidArgument("tensor entry index out of range for " + std::to_string(n) + " modes");
    if (!std::isfinite(e.value)) throw InvalidArgument("tensor entry is not finite");
  }
  std::sort(entries_.begin(), entries_.end(), [](const TensorEntry& l, const TensorEntry& r) {
    return std::tie(l.i, l.j, l.k) < std::tie(r.i, r.j, r.k);
  });
  // Merge duplicates so that every (i, j, k) appears once.
  std::vector<TensorEntry> merged;
  for (const auto& e : entries_) {
    if (!merged.empty() && merged.back().i == e.i && merged.back().j == e.j &&
        merged.back().k == e.k)
      merged.back().value += e.value;
    else
      merged.push_back(e);
  }
  entries_ = std::move(merged);
  row_begin_.assign(n + 1, 0);
  for (const auto& e : entries_) ++row_begin_[e.i + 1];
  for (std::size_t i = 0; i < n; ++i) row_begin_[i + 1] += row_begin_[i];
}

double QuasiHarmonicSystem::coefficient(std::size_t i, std::size_t j, std::size_t k) const {
  if (j > k) std::swap(j, k);
  const auto first = entries_.begin() + static_cast<std::ptrdiff_t>(row_begin_[i]);
  const auto last = entries_.begin() + static_cast<std::ptrdiff_t>(row_begin_[i + 1]);
  const auto it = std::lower_bound(first, last, std::pair{j, k},
                                   [](const TensorEntry& e, const std::pair<std::size_t, std::size_t>& key) {
                                     return std::pair{e.j, e.k} < key;
                                   });
  return (it != last && it->j == j && it->k == k) ? it->value : 0.0;
}

double QuasiHarmonicSystem::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& e : entries_) m = std::max(m, std::abs(e.value));
  return m;
}

std::vector<double> QuasiHarmonicSystem::quadratic(std::span<const double> x) const {
  if (x.size() != dof()) throw DimensionMismatch("quasi-harmonic coordinates", dof(), x.size());
  std::vector<double> out(dof(), 0.0);
  for (const auto& e : entries_) out[e.i] += e.value * x[e.j] * x[e.k];
  return out;
}

Matrix QuasiHarmonicSystem::force_jacobian(std::span<const double> x) const {
  if (x.size() != dof()) throw DimensionMismatch("quasi-harmonic coordinates", dof(), x.size());
  Matrix jac(dof(), dof());
  for (std::size_t i = 0; i < dof(); ++i) jac(i, i) = -lambdas_[i];
  for (const auto& e : entries_) {
    jac(e.i, e.j) += alpha_ * e.value * x[e.k];
    jac(e.i, e.k) += alpha_ * e.value * x[e.j];
  }
  return jac;
}

std::vector<double> QuasiHarmonicSystem::static_residual(std::span<const double> x) const {
  auto c = quadratic(x);
  for (std::size_t i = 0; i < dof(); ++i) c[i] = lambdas_[i] * x[i] - alpha_ * c[i];
  return c;
}

void QuasiHarmonicSystem::accel(std::span<const double> x, std::span<double> out) const {
  const std::size_t n = dof();
  if (x.size() != n) throw DimensionMismatch("quasi-harmonic coordinates", n, x.size());
  if (out.size() != n) throw DimensionMismatch("quasi-harmonic acceleration buffer", n, out.size());
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t e = row_begin_[i]; e < row_begin_[i + 1]; ++e) {
      const auto& t = entries_[e];
      acc += t.value * x[t.j] * x[t.k];
    }
    out[i] = -lambdas_[i] * x[i] + alpha_ * acc;
  }
}

std::vector<double> QuasiHarmonicSystem::accel(std::span<const double> x) const {
  std::vector<double> out(dof());
  accel(x, out);
  return out;
}

double QuasiHarmonicSystem::energy(std::span<const double> x, std::span<const double> v) const {
  if (v.size() != dof()) throw DimensionMismatch("quasi-harmonic velocities", dof(), v.size());
  const auto c = quadratic(x);
  double e = 0.0;
  for (std::size_t i = 0; i < dof(); ++i)
    e += weights_[i] * (0.5 * (v[i] * v[i] + lambdas_[i] * x[i] * x[i]) - alpha_ / 3.0 * x[i] * c[i]);
  return e;
}

QuasiHarmonicSystem QuasiHarmonicSystem::with_alpha(double alpha) const {
  QuasiHarmonicSystem copy = *this;
  copy.alpha_ = alpha;
  return copy;
}

QuasiHarmonicSystem to_quasi_harmonic(const ReducedSystem& sys, const ModalBasis& basis) {
  const std::size_t n = sys.dof();
  if (basis.lambdas.size() != n || basis.transform.rows() != n)
    throw DimensionMismatch("modal basis for reduced system", n, basis.lambdas.size());
  const Matrix& t = basis.transform;

  // The quadratic force is a difference of squared bond stretches,
  // N_r = d_{r+1}^2 - d_r^2 with d_b = q_b - q_{b-1} and fixed ends. With
  // T^T M T = I the projection T^{-1} M^{-1} equals T^T, so
  //   Q_i(x) = -sum_b D_bi (sum_j D_bj x_j)^2,   D_bj = T_bj - T_{b-1,j}.
  // Summing over bonds keeps round-off relative to each entry's own size.
  const std::size_t bonds = n + 1;
  Matrix d(bonds, n);
  for (std::size_t b = 0; b < bonds; ++b)
    for (std::size_t j = 0; j < n; ++j)
      d(b, j) = (b < n ? t(b, j) : 0.0) - (b > 0 ? t(b - 1, j) : 0.0);

  std::vector<double> full(n * n * n, 0.0);
  auto at = [&](std::size_t i, std::size_t j, std::size_t k) -> double& {
    return full[(i * n + j) * n + k];
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t b = 0; b < bonds; ++b) acc += d(b, i) * d(b, j) * d(b, k);
        at(i, j, k) = -acc;
        at(i, k, j) = -acc;
      }

  std::vector<TensorEntry> entries;
  double biggest = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) {
        const double c = (j == k) ? at(i, j, j) : at(i, j, k) + at(i, k, j);
        biggest = std::max(biggest, std::abs(c));
        entries.push_back({i, j, k, c});
      }
  std::erase_if(entries, [&](const TensorEntry& e) {
    return std::abs(e.value) < kTensorDropTolerance * biggest;
  });

  return QuasiHarmonicSystem(sys.p(), sys.a(), sys.alpha(), basis.lambdas, basis.labels,
                             std::move(entries));
}

std::vector<double> eval_qh_rhs(const QuasiHarmonicSystem& sys, std::span<const double> x,
                                double alpha) {
  return sys.with_alpha(alpha).accel(x);
}

QuasiHarmonicSystem rescale(const QuasiHarmonicSystem& sys, std::span<const double> s) {
  const std::size_t n = sys.dof();
  if (s.size() != n) throw DimensionMismatch("scale factors", n, s.size());
  for (double f : s)
    if (f == 0.0 || !std::isfinite(f)) throw InvalidArgument("scale factors must be finite and nonzero");
  std::vector<TensorEntry> entries(sys.entries().begin(), sys.entries().end());
  for (auto& e : entries) e.value *= s[e.j] * s[e.k] / s[e.i];
  std::vector<double> weights(sys.weights().begin(), sys.weights().end());
  for (std::size_t i = 0; i < n; ++i) weights[i] *= s[i] * s[i];
  return QuasiHarmonicSystem(sys.p(), sys.a(), sys.alpha(),
                             std::vector<double>(sys.lambdas().begin(), sys.lambdas().end()),
                             std::vector<ModeLabel>(sys.labels().begin(), sys.labels().end()),
                             std::move(entries), std::move(weights));
}

QuasiHarmonicSystem permute(const QuasiHarmonicSystem& sys, std::span<const std::size_t> order) {
  const std::size_t n = sys.dof();
  if (order.size() != n) throw DimensionMismatch("mode permutation", n, order.size());
  std::vector<std::size_t> new_of_old(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (order[r] >= n || new_of_old[order[r]] != n)
      throw InvalidArgument("mode order is not a permutation");
    new_of_old[order[r]] = r;
  }
  std::vector<double> lambdas(n), weights(n);
  std::vector<ModeLabel> labels(n);
  for (std::size_t r = 0; r < n; ++r) {
    lambdas[r] = sys.lambdas()[order[r]];
    weights[r] = sys.weights()[order[r]];
    labels[r] = sys.labels()[order[r]];
  }
  std::vector<TensorEntry> entries;
  entries.reserve(sys.entries().size());
  for (const auto& e : sys.entries())
    entries.push_back({new_of_old[e.i], new_of_old[e.j], new_of_old[e.k], e.value});
  return QuasiHarmonicSystem(sys.p(), sys.a(), sys.alpha(), std::move(lambdas), std::move(labels),
                             std::move(entries), std::move(weights));
}

}  // namespace fpu
