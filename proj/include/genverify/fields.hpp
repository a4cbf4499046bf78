#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "genverify/expr.hpp"
#include "genverify/jet.hpp"
#include "genverify/linalg.hpp"

namespace genverify {

using Point = std::vector<double>;
using JetVector = Vec<Jet>;
using JetMatrix = Matrix<Jet>;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Coordinate box U in R^n.
class Chart {
 public:
  explicit Chart(std::vector<Interval> domain);
  int dim() const { return static_cast<int>(domain_.size()); }
  const std::vector<Interval>& domain() const { return domain_; }
  bool contains(std::span<const double> x) const;  // open box

 private:
  std::vector<Interval> domain_;
};

/// Deterministic sampler of points strictly inside a chart.
class PointSampler {
 public:
  PointSampler(const Chart& chart, std::uint64_t seed);
  Point next();
  std::vector<Point> take(int count);

 private:
  double unit();  // uniform in the open interval (0, 1)

  Chart chart_;
  std::mt19937_64 rng_;
};

/// Tensor field of valence (contra, co) with one expression per component.
/// Components are stored row-major, contravariant indices first:
/// h_ij at [i*n+j], J^k_j at [k*n+j], Gamma^k_ij at [(k*n+i)*n+j].
struct FieldSpec {
  int n = 0;
  int contra = 0;
  int co = 0;
  std::vector<Expr> components;

  static FieldSpec from_strings(int n, int contra, int co, const std::vector<std::string>& src);
  int size() const;
};

/// Jets of every component at x, seeded from the coordinates.
std::vector<Jet> eval_field(const FieldSpec& f, std::span<const double> x);

/// Jets of a (0,2) or (1,1) field arranged as an n x n matrix.
JetMatrix eval_matrix_field(const FieldSpec& f, std::span<const double> x);

/// Index symmetry of a (0,2) tensor h.
enum class SymmetryKind { symmetric, skew, general };

std::string to_string(SymmetryKind k);
SymmetryKind symmetry_kind_from_string(const std::string& s);

/// Non-degenerate (0,2) tensor at a point with derivatives to second order.
struct MetricAt {
  Point x;
  SymmetryKind kind = SymmetryKind::general;
  JetMatrix h;      // h(d_i, d_j)
  JetMatrix h_inv;  // matrix inverse of h
  double rcond = 0.0;

  int dim() const { return h.rows(); }
  double value(int i, int j) const { return h(i, j).value(); }
  double dh(int k, int i, int j) const { return h(i, j).grad(k); }
  double ddh(int k, int l, int i, int j) const { return h(i, j).hess(k, l); }
  double inv(int i, int j) const { return h_inv(i, j).value(); }
};

/// Builds a MetricAt, checking the declared symmetry on values within
/// sym_tol*(1+|h|) and inverting. A zero tolerance demands exact symmetry.
MetricAt make_metric(const JetMatrix& h, SymmetryKind kind, const Point& x, double sym_tol = 0.0);

MetricAt metric_at(const FieldSpec& h, SymmetryKind kind, std::span<const double> x);

/// Inverse of a value matrix with its reciprocal condition number.
struct Inverted {
  Matrix<double> inv;
  double rcond = 0.0;
};
Inverted invert(const Matrix<double>& a, const Point& at = {});

/// flat(X)_j = h(X, d_j) = h_ij X^i, so the flat matrix is h transposed.
template <class T>
Matrix<T> flat_matrix(const Matrix<T>& h) {
  return transpose(h);
}

/// sharp is the inverse of flat, i.e. the transpose of h^-1.
template <class T>
Matrix<T> sharp_matrix(const Matrix<T>& h_inv) {
  return transpose(h_inv);
}

template <class T>
Vec<T> flat(const Matrix<T>& h, const Vec<T>& X) {
  const int n = h.rows();
  Vec<T> r(n, T(0.0));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) r[j] += h(i, j) * X[i];
  return r;
}

template <class T>
Vec<T> sharp(const Matrix<T>& h_inv, const Vec<T>& eta) {
  const int n = h_inv.rows();
  Vec<T> r(n, T(0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r[i] += h_inv(j, i) * eta[j];
  return r;
}

/// h(X, Y) = h_ij X^i Y^j.
template <class T>
T bilinear(const Matrix<T>& h, const Vec<T>& X, const Vec<T>& Y) {
  T r(0.0);
  for (int i = 0; i < h.rows(); ++i)
    for (int j = 0; j < h.cols(); ++j) r += h(i, j) * X[i] * Y[j];
  return r;
}

/// h-orthonormal frame by Gram-Schmidt on the rows of `start` (identity by
/// default). Row a of the result is E_a. Requires h positive definite on the
/// span; throws FrameError otherwise.
template <class T>
Matrix<T> orthonormal_frame(const Matrix<T>& h, const Matrix<double>& start, const Point& at = {}) {
  const int n = h.rows();
  Matrix<T> E(n, n);
  for (int a = 0; a < n; ++a) {
    Vec<T> v(n);
    for (int i = 0; i < n; ++i) v[i] = T(start(a, i));
    for (int b = 0; b < a; ++b) {
      Vec<T> e(n);
      for (int i = 0; i < n; ++i) e[i] = E(b, i);
      const T c = bilinear(h, v, e);
      for (int i = 0; i < n; ++i) v[i] -= c * e[i];
    }
    const T norm2 = bilinear(h, v, v);
    if (!(value_of(norm2) > 1e-12)) throw FrameError("metric not positive definite on frame", at);
    using std::sqrt;
    const T s = sqrt(norm2);
    for (int i = 0; i < n; ++i) E(a, i) = v[i] / s;
  }
  return E;
}

template <class T>
Matrix<T> orthonormal_frame(const Matrix<T>& h, const Point& at = {}) {
  return orthonormal_frame(h, Matrix<double>::identity(h.rows()), at);
}

/// Row r of a jet matrix.
JetVector row(const JetMatrix& m, int r);

/// Constant jets (zero derivatives) of dimension n.
JetVector constant_vector(const Vec<double>& v, int n);

}  // namespace genverify
