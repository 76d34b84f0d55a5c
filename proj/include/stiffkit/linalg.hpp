#pragma once

#include <complex>
#include <vector>

#include "stiffkit/errors.hpp"

namespace stiffkit {

using Vec = std::vector<double>;
using CVec = std::vector<std::complex<double>>;

// Dense row-major matrix over double or complex<double>.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, T value = T{});

  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  const T& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

  const std::vector<T>& data() const { return data_; }

  std::vector<T> apply(const std::vector<T>& v) const;  // matrix * vector
  Matrix matmul(const Matrix& other) const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator*=(T scale);

  double max_abs() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<std::complex<double>>;

// LU factorization with partial pivoting, immutable once built. A single
// factorization serves arbitrarily many solves; solving never mutates it.
template <typename T>
class LU {
 public:
  explicit LU(const Matrix<T>& m);  // throws SingularMatrix, DimensionMismatch

  int dimension() const { return n_; }

  // Row permutation as a bijection on {0..n-1}: row i of PA is row perm[i] of A.
  const std::vector<int>& permutation() const { return perm_; }

  std::vector<T> solve(const std::vector<T>& b) const;  // throws DimensionMismatch

 private:
  int n_ = 0;
  std::vector<T> lu_;  // packed unit-lower L and upper U, row-major
  std::vector<int> perm_;
};

using LUFactorization = LU<double>;
using ComplexLU = LU<std::complex<double>>;

// One-shot complex solve M x = b (partial pivoting). SingularMatrix from the
// factorization doubles as the pole signal for stability-function callers.
CVec complex_solve(const ComplexMatrix& m, const CVec& b);

// Small vector helpers shared across modules.
Vec ones(int n);
double dot(const Vec& a, const Vec& b);
Vec cwise(const Vec& a, const Vec& b);  // componentwise product
double norm2(const Vec& v);
double norm_inf(const Vec& v);
bool all_finite(const Vec& v);
void axpy(double a, const Vec& x, Vec& y);  // y += a*x

// I - scale * M, used for the shifted operators the steppers factorize.
RealMatrix shifted_identity(const RealMatrix& m, double scale);

// Dominant eigenvalue estimate by power iteration in complex arithmetic;
// adequate for locating the extreme of a strongly one-sided spectrum.
std::complex<double> dominant_eigenvalue(const RealMatrix& m, int iterations, unsigned long seed);

}  // namespace stiffkit
