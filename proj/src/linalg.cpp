#include "stiffkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

namespace stiffkit {

namespace {
constexpr double kPivotRelTol = 1e-14;
}

template <typename T>
Matrix<T>::Matrix(int rows, int cols, T value)
    : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, value) {
  if (rows < 1 || cols < 1) throw DimensionMismatch("matrix dimensions must be >= 1");
}

template <typename T>
Matrix<T> Matrix<T>::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = T{1};
  return m;
}

template <typename T>
std::vector<T> Matrix<T>::apply(const std::vector<T>& v) const {
  if (static_cast<int>(v.size()) != cols_)
    throw DimensionMismatch("matrix-vector size mismatch");
  std::vector<T> out(rows_, T{});
  for (int i = 0; i < rows_; ++i) {
    T acc{};
    const T* row = &data_[static_cast<size_t>(i) * cols_];
    for (int j = 0; j < cols_; ++j) acc += row[j] * v[j];
    out[i] = acc;
  }
  return out;
}

template <typename T>
Matrix<T> Matrix<T>::matmul(const Matrix& other) const {
  if (cols_ != other.rows_) throw DimensionMismatch("matrix-matrix size mismatch");
  Matrix out(rows_, other.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = 0; k < cols_; ++k) {
      const T aik = (*this)(i, k);
      if (aik == T{}) continue;
      for (int j = 0; j < other.cols_; ++j) out(i, j) += aik * other(k, j);
    }
  }
  return out;
}

template <typename T>
Matrix<T>& Matrix<T>::operator+=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw DimensionMismatch("matrix addition size mismatch");
  for (size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

template <typename T>
Matrix<T>& Matrix<T>::operator*=(T scale) {
  for (auto& x : data_) x *= scale;
  return *this;
}

template <typename T>
double Matrix<T>::max_abs() const {
  double m = 0;
  for (const auto& x : data_) m = std::max(m, std::abs(x));
  return m;
}

template <typename T>
LU<T>::LU(const Matrix<T>& m) {
  if (!m.square()) throw DimensionMismatch("LU requires a square matrix");
  n_ = m.rows();
  lu_ = m.data();
  perm_.resize(n_);
  for (int i = 0; i < n_; ++i) perm_[i] = i;

  const double tol = kPivotRelTol * m.max_abs();
  auto at = [this](int i, int j) -> T& { return lu_[static_cast<size_t>(i) * n_ + j]; };

  for (int k = 0; k < n_; ++k) {
    int piv = k;
    double best = std::abs(at(k, k));
    for (int i = k + 1; i < n_; ++i) {
      const double cand = std::abs(at(i, k));
      if (cand > best) {
        best = cand;
        piv = i;
      }
    }
    if (best <= tol)
      throw SingularMatrix("pivot " + std::to_string(k) + " below relative threshold");
    if (piv != k) {
      for (int j = 0; j < n_; ++j) std::swap(at(k, j), at(piv, j));
      std::swap(perm_[k], perm_[piv]);
    }
    const T pivot = at(k, k);
    for (int i = k + 1; i < n_; ++i) {
      const T f = at(i, k) / pivot;
      at(i, k) = f;
      if (f == T{}) continue;
      for (int j = k + 1; j < n_; ++j) at(i, j) -= f * at(k, j);
    }
  }
}

template <typename T>
std::vector<T> LU<T>::solve(const std::vector<T>& b) const {
  if (static_cast<int>(b.size()) != n_)
    throw DimensionMismatch("solve: rhs length does not match factorization");
  std::vector<T> x(n_);
  for (int i = 0; i < n_; ++i) x[i] = b[perm_[i]];
  const T* lu = lu_.data();
  for (int i = 1; i < n_; ++i) {
    T acc = x[i];
    const T* row = &lu[static_cast<size_t>(i) * n_];
    for (int j = 0; j < i; ++j) acc -= row[j] * x[j];
    x[i] = acc;
  }
  for (int i = n_ - 1; i >= 0; --i) {
    T acc = x[i];
    const T* row = &lu[static_cast<size_t>(i) * n_];
    for (int j = i + 1; j < n_; ++j) acc -= row[j] * x[j];
    x[i] = acc / row[i];
  }
  return x;
}

template class Matrix<double>;
template class Matrix<std::complex<double>>;
template class LU<double>;
template class LU<std::complex<double>>;

CVec complex_solve(const ComplexMatrix& m, const CVec& b) {
  ComplexLU lu(m);
  return lu.solve(b);
}

Vec ones(int n) { return Vec(n, 1.0); }

double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot: length mismatch");
  double acc = 0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

Vec cwise(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionMismatch("cwise: length mismatch");
  Vec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

double norm2(const Vec& v) {
  double acc = 0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

double norm_inf(const Vec& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool all_finite(const Vec& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

void axpy(double a, const Vec& x, Vec& y) {
  if (x.size() != y.size()) throw DimensionMismatch("axpy: length mismatch");
  for (size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

RealMatrix shifted_identity(const RealMatrix& m, double scale) {
  if (!m.square()) throw DimensionMismatch("shifted_identity requires square matrix");
  RealMatrix out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = (i == j ? 1.0 : 0.0) - scale * m(i, j);
  return out;
}

std::complex<double> dominant_eigenvalue(const RealMatrix& m, int iterations, unsigned long seed) {
  if (!m.square()) throw DimensionMismatch("dominant_eigenvalue requires square matrix");
  const int n = m.rows();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  CVec x(n);
  for (auto& v : x) v = {unif(rng), unif(rng)};

  auto applyc = [&](const CVec& v) {
    CVec out(n, {0.0, 0.0});
    for (int i = 0; i < n; ++i) {
      std::complex<double> acc{0.0, 0.0};
      for (int j = 0; j < n; ++j) acc += m(i, j) * v[j];
      out[i] = acc;
    }
    return out;
  };

  std::complex<double> lambda{0.0, 0.0};
  for (int it = 0; it < iterations; ++it) {
    CVec y = applyc(x);
    std::complex<double> num{0.0, 0.0};
    double den = 0;
    for (int i = 0; i < n; ++i) {
      num += std::conj(x[i]) * y[i];
      den += std::norm(x[i]);
    }
    lambda = num / den;
    double scale = 0;
    for (const auto& v : y) scale = std::max(scale, std::abs(v));
    if (scale == 0) break;
    for (auto& v : y) v /= scale;
    x = std::move(y);
  }
  return lambda;
}

}  // namespace stiffkit
