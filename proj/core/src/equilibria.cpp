#include "fpu/equilibria.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "fpu/errors.hpp"

namespace fpu {

namespace {

// Static equations F(x) = 0 with Jacobian dF/dx, plus the acceleration
// Jacobian used for the linearised spectrum.
template <class System>
struct StaticProblem;

template <>
struct StaticProblem<ReducedSystem> {
  const ReducedSystem& sys;
  std::size_t dim() const { return sys.dof(); }
  std::vector<double> residual(std::span<const double> x) const { return sys.static_residual(x); }
  Matrix residual_jacobian(std::span<const double> x) const {
    Matrix j = sys.force_jacobian(x);
    for (std::size_t r = 0; r < j.rows(); ++r)
      for (std::size_t c = 0; c < j.cols(); ++c) j(r, c) = -j(r, c);
    return j;
  }
  Matrix accel_jacobian(std::span<const double> x) const {
    Matrix j = sys.force_jacobian(x);
    const auto m = sys.masses();
    for (std::size_t r = 0; r < j.rows(); ++r)
      for (std::size_t c = 0; c < j.cols(); ++c) j(r, c) /= m[r];
    return j;
  }
};

template <>
struct StaticProblem<QuasiHarmonicSystem> {
  const QuasiHarmonicSystem& sys;
  std::size_t dim() const { return sys.dof(); }
  std::vector<double> residual(std::span<const double> x) const { return sys.static_residual(x); }
  Matrix residual_jacobian(std::span<const double> x) const {
    Matrix j = sys.force_jacobian(x);
    for (std::size_t r = 0; r < j.rows(); ++r)
      for (std::size_t c = 0; c < j.cols(); ++c) j(r, c) = -j(r, c);
    return j;
  }
  Matrix accel_jacobian(std::span<const double> x) const { return sys.force_jacobian(x); }
};

template <class System>
EquilibriumReport classify(const StaticProblem<System>& prob, std::span<const double> point) {
  if (point.size() != prob.dim()) throw DimensionMismatch("equilibrium point", prob.dim(), point.size());
  EquilibriumReport rep;
  rep.point.assign(point.begin(), point.end());
  rep.residual = max_abs(prob.residual(point));
  if (rep.residual > 1e-10)
    throw InvalidArgument("point is not an equilibrium (static residual " +
                          std::to_string(rep.residual) + ")");
  rep.eigenvalues = linearised_spectrum(prob.accel_jacobian(point));
  double scale = 0.0;
  for (const auto& mu : rep.eigenvalues) scale = std::max(scale, std::abs(mu));
  const double thr = 1e-8 * std::max(scale, 1e-300);
  for (const auto& mu : rep.eigenvalues) {
    if (std::abs(mu.real()) <= thr)
      ++rep.imaginary;
    else if (std::abs(mu.imag()) <= thr)
      ++(mu.real() > 0.0 ? rep.positive_real : rep.negative_real);
    else
      ++rep.complex;
  }
  return rep;
}

template <class System>
std::vector<EquilibriumReport> search(const StaticProblem<System>& prob, const EquilibriumSearch& opts) {
  const std::size_t n = prob.dim();
  if (n > opts.max_dimension)
    throw InvalidArgument("exhaustive equilibrium search limited to dimension " +
                          std::to_string(opts.max_dimension) + ", got " + std::to_string(n));
  if (opts.grid_per_dim < 1) throw InvalidArgument("grid needs at least one point per dimension");

  std::vector<double> axis(opts.grid_per_dim);
  for (std::size_t k = 0; k < axis.size(); ++k)
    axis[k] = axis.size() == 1 ? 0.0
                               : opts.box_halfwidth * (-1.0 + 2.0 * static_cast<double>(k) /
                                                                 static_cast<double>(axis.size() - 1));

  std::vector<std::vector<double>> found;
  std::vector<std::size_t> idx(n, 0);
  std::vector<double> x(n);
  for (bool more = true; more;) {
    for (std::size_t d = 0; d < n; ++d) x[d] = axis[idx[d]];

    bool converged = false;
    for (std::size_t it = 0; it < opts.max_iterations; ++it) {
      std::vector<double> f = prob.residual(x);
      for (double& v : f) v = -v;
      std::vector<double> dx;
      try {
        dx = solve(prob.residual_jacobian(x), std::move(f));
      } catch (const InvalidArgument&) {
        break;
      }
      for (std::size_t d = 0; d < n; ++d) x[d] += dx[d];
      if (max_abs(x) > 1e6 || !std::isfinite(max_abs(x))) break;
      if (norm2(dx) <= opts.step_tolerance * std::max(1.0, norm2(x))) {
        converged = true;
        break;
      }
    }
    // Rounding can stall the step just above tolerance; accept on residual.
    if (!converged && std::isfinite(max_abs(x)) && max_abs(x) <= 1e6)
      converged = max_abs(prob.residual(x)) <= opts.residual_tolerance;
    if (converged && max_abs(prob.residual(x)) <= opts.residual_tolerance) {
      const bool duplicate = std::any_of(found.begin(), found.end(), [&](const auto& other) {
        double d2 = 0.0;
        for (std::size_t d = 0; d < n; ++d) d2 += (other[d] - x[d]) * (other[d] - x[d]);
        return std::sqrt(d2) <= opts.dedup_distance;
      });
      if (!duplicate) found.push_back(x);
    }

    more = false;
    for (std::size_t d = 0; d < n; ++d) {
      if (++idx[d] < axis.size()) {
        more = true;
        break;
      }
      idx[d] = 0;
    }
  }

  for (auto& pt : found)
    for (double& v : pt)
      if (std::abs(v) < 1e-14) v = 0.0;
  std::sort(found.begin(), found.end(), [](const auto& l, const auto& r) {
    const bool lz = max_abs(l) == 0.0, rz = max_abs(r) == 0.0;
    if (lz != rz) return lz;
    return l < r;
  });

  std::vector<EquilibriumReport> out;
  out.reserve(found.size());
  for (const auto& pt : found) out.push_back(classify(prob, pt));
  return out;
}

}  // namespace

std::vector<std::complex<double>> linearised_spectrum(const Matrix& accel_jacobian) {
  const std::size_t n = accel_jacobian.rows();
  Eigen::MatrixXd a(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = accel_jacobian(r, c);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  if (solver.info() != Eigen::Success) throw Error("eigenvalue computation failed");
  std::vector<std::complex<double>> mu;
  mu.reserve(2 * n);
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    const std::complex<double> root = std::sqrt(solver.eigenvalues()(k));
    mu.push_back(root);
    mu.push_back(-root);
  }
  std::sort(mu.begin(), mu.end(), [](const auto& l, const auto& r) {
    return l.imag() != r.imag() ? l.imag() < r.imag() : l.real() < r.real();
  });
  return mu;
}

std::vector<EquilibriumReport> find_equilibria(const ReducedSystem& sys, const EquilibriumSearch& opts) {
  return search(StaticProblem<ReducedSystem>{sys}, opts);
}

std::vector<EquilibriumReport> find_equilibria(const QuasiHarmonicSystem& sys,
                                               const EquilibriumSearch& opts) {
  return search(StaticProblem<QuasiHarmonicSystem>{sys}, opts);
}

EquilibriumReport classify_equilibrium(const ReducedSystem& sys, std::span<const double> point) {
  return classify(StaticProblem<ReducedSystem>{sys}, point);
}

EquilibriumReport classify_equilibrium(const QuasiHarmonicSystem& sys, std::span<const double> point) {
  return classify(StaticProblem<QuasiHarmonicSystem>{sys}, point);
}

}  // namespace fpu
