#pragma once

#include <vector>

#include "genverify/fields.hpp"

namespace genverify {

/// Three-index array; the meaning of each slot is fixed by the producer.
template <class T>
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), data_(n * n * n, T(0.0)) {}
  int dim() const { return n_; }
  T& operator()(int a, int b, int c) { return data_[(a * n_ + b) * n_ + c]; }
  const T& operator()(int a, int b, int c) const { return data_[(a * n_ + b) * n_ + c]; }
  const std::vector<T>& data() const { return data_; }

 private:
  int n_ = 0;
  std::vector<T> data_;
};

using Tensor3d = Tensor3<double>;

/// R(l, k, i, j) = R^l_kij, the d_l component of R(d_i, d_j) d_k.
class Curvature {
 public:
  Curvature() = default;
  explicit Curvature(int n) : n_(n), data_(n * n * n * n, 0.0) {}
  int dim() const { return n_; }
  double& operator()(int l, int k, int i, int j) { return data_[((l * n_ + k) * n_ + i) * n_ + j]; }
  double operator()(int l, int k, int i, int j) const { return data_[((l * n_ + k) * n_ + i) * n_ + j]; }

  /// R(X, Y) Z for vectors.
  Vec<double> apply(const Vec<double>& X, const Vec<double>& Y, const Vec<double>& Z) const;
  /// R(X, Y) acting on a covector: (R(X,Y) g)(W) = -g(R(X,Y) W).
  Vec<double> apply_covector(const Vec<double>& X, const Vec<double>& Y, const Vec<double>& g) const;

 private:
  int n_ = 0;
  std::vector<double> data_;
};

/// Connection coefficients at a point: Gamma(k, i, j) is the d_k component of
/// nabla_{d_i} d_j. Entries are jets so that curvature can differentiate them.
class Christoffel {
 public:
  Christoffel() = default;
  explicit Christoffel(int n);
  int dim() const { return n_; }
  Jet& operator()(int k, int i, int j) { return c_[(k * n_ + i) * n_ + j]; }
  const Jet& operator()(int k, int i, int j) const { return c_[(k * n_ + i) * n_ + j]; }
  double value(int k, int i, int j) const { return (*this)(k, i, j).value(); }

  /// Connection matrix along d_i on vectors: A[k][j] = Gamma^k_ij.
  JetMatrix matrix(int i) const;

 private:
  int n_ = 0;
  std::vector<Jet> c_;
};

Christoffel zero_connection(int n);
Christoffel explicit_connection(const FieldSpec& gamma, std::span<const double> x);
Christoffel levi_civita(const MetricAt& g);

/// Dual connection: X h(Y,Z) = h(nabla_X Y, Z) + h(Y, nabla*_X Z).
/// Requires h symmetric or skew.
Christoffel dual_connection(const Christoffel& nabla, const MetricAt& h);

/// (1+a)/2 nabla + (1-a)/2 other.
Christoffel alpha_connection(const Christoffel& nabla, const Christoffel& other, double alpha);

Christoffel operator+(const Christoffel& a, const Christoffel& b);
Christoffel operator-(const Christoffel& a, const Christoffel& b);
Christoffel operator*(double s, const Christoffel& a);
double max_abs_difference(const Christoffel& a, const Christoffel& b);

/// T(k, i, j) = T^k_ij, the d_k component of nabla_i d_j - nabla_j d_i.
Tensor3d torsion(const Christoffel& nabla);

/// (i, j, k) = (nabla_{d_i} h)(d_j, d_k).
Tensor3<Jet> nabla_h_jets(const Christoffel& nabla, const MetricAt& h);
Tensor3d nabla_h(const Christoffel& nabla, const MetricAt& h);

/// (i, j, k) = (nabla_i h)(j, k) - (nabla_j h)(i, k) + h(T(d_i, d_j), d_k).
Tensor3d d_nabla_h(const Christoffel& nabla, const MetricAt& h);

Curvature curvature(const Christoffel& nabla);

/// Ric(Y, Z) = sum_a h(R(E_a, Y) Z, E_a) over an h-orthonormal frame.
Matrix<double> ricci_base(const Christoffel& nabla, const MetricAt& h);
double scalar_base(const Matrix<double>& ricci, const MetricAt& h);

/// (i, k, j) = ((nabla_{d_i} J) d_j)^k.
Tensor3<Jet> nabla_J_jets(const Christoffel& nabla, const JetMatrix& J);
Tensor3d nabla_J(const Christoffel& nabla, const JetMatrix& J);

/// F(i, j, k) = h((nabla_{d_i} J) d_j, d_k).
Tensor3d F_tensor(const MetricAt& h, const Christoffel& nabla, const JetMatrix& J);

struct FConditions {
  Tensor3d F;
  Tensor3d C1;  // F(X,Y,Z) + F(Y,Z,X) - F(X,Z,Y) - F(Y,X,Z)
  Tensor3d C2;  // F(Y,Z,X) - F(X,Z,Y)
  Tensor3d dJ;  // (k, i, j): component k of (nabla_i J) d_j - (nabla_j J) d_i
};
FConditions F_conditions(const MetricAt& h, const Christoffel& nabla, const JetMatrix& J);

/// Metric g~(X, Y) = g(X, J Y). Requires J to be g-symmetric.
MetricAt twin_metric(const MetricAt& g, const JetMatrix& J);

/// nabla* = nabla + J^-1 (nabla J), the dual of nabla with respect to g~.
Christoffel twin_dual(const Christoffel& lc, const JetMatrix& J);

/// The alpha-family (1+a)/2 nabla + (1-a)/2 twin_dual.
Christoffel twin_alpha(const Christoffel& lc, const JetMatrix& J, double alpha);

/// nabla - (1-a)/2 J^-1 (nabla J), a closed form that agrees with twin_alpha
/// only where nabla J vanishes.
Christoffel twin_alpha_display(const Christoffel& lc, const JetMatrix& J, double alpha);

struct MetallicObstruction {
  Tensor3d commutator;  // (k, i, j): (nabla_i J) J d_j - J (nabla_i J) d_j
  Tensor3d closed;      // (k, i, j): (p I - 2 J)(nabla_i J) d_j
};

/// Requires J^2 = p J + q I within tol; throws ValidationError otherwise.
MetallicObstruction metallic_obstruction(const Christoffel& nabla, const JetMatrix& J, double p, double q,
                                         double tol = 1e-9);
double metallic_defect(const JetMatrix& J, double p, double q);

// Field-level operations on jet-valued fields at the seed point.

/// X(f) = X^i d_i f.
Jet derivative_along(const JetVector& X, const Jet& f);
/// nabla_X Y.
JetVector covariant_vector(const Christoffel& nabla, const JetVector& X, const JetVector& Y);
/// nabla_X beta.
JetVector covariant_covector(const Christoffel& nabla, const JetVector& X, const JetVector& beta);
JetVector lie_bracket(const JetVector& X, const JetVector& Y);
/// (nabla_X h)(Y, .) as a covector field.
JetVector nabla_h_apply(const Christoffel& nabla, const MetricAt& h, const JetVector& X, const JetVector& Y);
/// (nabla_X J) Y as a vector field.
JetVector nabla_J_apply(const Christoffel& nabla, const JetMatrix& J, const JetVector& X, const JetVector& Y);

}  // namespace genverify
