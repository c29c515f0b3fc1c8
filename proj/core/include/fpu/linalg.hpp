#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fpu {

/// Dense row-major matrix of doubles. Sized for the small systems handled
/// here (at most a few hundred rows), so no blocking or expression templates.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::vector<double> column(std::size_t c) const;

  Matrix transposed() const;
  double max_abs() const;

  friend Matrix operator*(const Matrix& lhs, const Matrix& rhs);
  friend Matrix operator-(const Matrix& lhs, const Matrix& rhs);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

std::vector<double> multiply(const Matrix& m, std::span<const double> x);

/// Eigenpairs of a real symmetric matrix.
struct SymmetricEigen {
  std::vector<double> values;  // unsorted, in the order Jacobi left them
  Matrix vectors;              // column k belongs to values[k]
  int sweeps = 0;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
/// `rel_tol` times the Frobenius norm of the input.
SymmetricEigen jacobi_eigen(const Matrix& symmetric, double rel_tol = 1e-13,
                            int max_sweeps = 100);

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// Throws InvalidArgument when A is numerically singular.
std::vector<double> solve(Matrix a, std::vector<double> b);

/// Least-squares solution of min |A x - b|_2 via the normal equations.
std::vector<double> least_squares(const Matrix& a, std::span<const double> b);

double max_abs(std::span<const double> v);
double norm2(std::span<const double> v);

}  // namespace fpu
