#pragma once

#include <algorithm>
#include <cmath>
#include <type_traits>
#include <vector>

#include "genverify/errors.hpp"
#include "genverify/jet.hpp"

namespace genverify {

/// Small dense row-major matrix over double or Jet.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, const T& fill = T(0.0)) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1.0);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  T& operator()(int i, int j) { return data_[i * cols_ + j]; }
  const T& operator()(int i, int j) const { return data_[i * cols_ + j]; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

template <class T>
using Vec = std::vector<T>;

template <class T>
Matrix<T> transpose(const Matrix<T>& a) {
  Matrix<T> r(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(j, i) = a(i, j);
  return r;
}

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw UsageError("matrix product shape mismatch");
  Matrix<T> r(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k)
      for (int j = 0; j < b.cols(); ++j) r(i, j) += a(i, k) * b(k, j);
  return r;
}

template <class T>
Vec<T> operator*(const Matrix<T>& a, const Vec<T>& v) {
  if (a.cols() != static_cast<int>(v.size())) throw UsageError("matrix-vector shape mismatch");
  Vec<T> r(a.rows(), T(0.0));
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) r[i] += a(i, k) * v[k];
  return r;
}

template <class T>
Matrix<T> operator+(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> r = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) += b(i, j);
  return r;
}

template <class T>
Matrix<T> operator-(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> r = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) -= b(i, j);
  return r;
}

template <class T>
Matrix<T> operator*(double s, const Matrix<T>& a) {
  Matrix<T> r = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = s * a(i, j);
  return r;
}

template <class T>
Vec<T> operator+(const Vec<T>& a, const Vec<T>& b) {
  Vec<T> r = a;
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += b[i];
  return r;
}

template <class T>
Vec<T> operator-(const Vec<T>& a, const Vec<T>& b) {
  Vec<T> r = a;
  for (std::size_t i = 0; i < a.size(); ++i) r[i] -= b[i];
  return r;
}

template <class T>
Vec<T> operator-(const Vec<T>& a) {
  Vec<T> r = a;
  for (auto& x : r) x = -x;
  return r;
}

template <class T>
Vec<T> operator*(double s, const Vec<T>& a) {
  Vec<T> r = a;
  for (auto& x : r) x = s * x;
  return r;
}

template <class T>
T dot(const Vec<T>& a, const Vec<T>& b) {
  T r(0.0);
  for (std::size_t i = 0; i < a.size(); ++i) r += a[i] * b[i];
  return r;
}

template <class T>
Matrix<double> values(const Matrix<T>& a) {
  Matrix<double> r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = value_of(a(i, j));
  return r;
}

template <class T>
Vec<double> values(const Vec<T>& a) {
  Vec<double> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = value_of(a[i]);
  return r;
}

inline double max_abs(const Vec<double>& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

inline double max_abs(const Matrix<double>& a) {
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j)));
  return m;
}

inline double norm1(const Matrix<double>& a) {
  double m = 0.0;
  for (int j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
    m = std::max(m, s);
  }
  return m;
}

inline constexpr double kMinRcond = 1e-10;

/// Inverse by Gauss-Jordan elimination with partial pivoting on values.
/// Works on jets as well, giving the derivatives of the inverse. rcond receives
/// 1/(|A|_1 |A^-1|_1). Throws DegeneracyError when singular or rcond < 1e-10.
template <class T>
Matrix<T> inverse(const Matrix<T>& a, double* rcond_out = nullptr, const std::vector<double>& at = {}) {
  const int n = a.rows();
  if (a.cols() != n) throw UsageError("inverse of non-square matrix");
  Matrix<T> m = a;
  Matrix<T> inv = Matrix<T>::identity(n);
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(value_of(m(r, c))) > std::abs(value_of(m(piv, c)))) piv = r;
    if (!(std::abs(value_of(m(piv, c))) > 0.0)) throw DegeneracyError("singular matrix", at);
    if (piv != c) {
      for (int j = 0; j < n; ++j) {
        std::swap(m(c, j), m(piv, j));
        std::swap(inv(c, j), inv(piv, j));
      }
    }
    const T d = m(c, c);
    for (int j = 0; j < n; ++j) {
      m(c, j) = m(c, j) / d;
      inv(c, j) = inv(c, j) / d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const T f = m(r, c);
      if (value_of(f) == 0.0 && std::is_same_v<T, double>) continue;
      for (int j = 0; j < n; ++j) {
        m(r, j) -= f * m(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  const double rc = 1.0 / (norm1(values(a)) * norm1(values(inv)));
  if (rcond_out) *rcond_out = rc;
  if (!(rc >= kMinRcond)) throw DegeneracyError("ill-conditioned matrix (rcond " + std::to_string(rc) + ")", at);
  return inv;
}

template <class T>
T determinant(const Matrix<T>& a) {
  const int n = a.rows();
  Matrix<T> m = a;
  T det(1.0);
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(value_of(m(r, c))) > std::abs(value_of(m(piv, c)))) piv = r;
    if (value_of(m(piv, c)) == 0.0) return T(0.0);
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(m(c, j), m(piv, j));
      det = -det;
    }
    det = det * m(c, c);
    for (int r = c + 1; r < n; ++r) {
      const T f = m(r, c) / m(c, c);
      for (int j = c; j < n; ++j) m(r, j) -= f * m(c, j);
    }
  }
  return det;
}

}  // namespace genverify
