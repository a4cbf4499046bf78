#pragma once

#include <vector>

#include "genverify/base_geometry.hpp"

namespace genverify {

/// Section X + xi of TM + T*M: vector part and covector part.
template <class T>
struct BasicSection {
  Vec<T> vec;
  Vec<T> cov;
};

using Section = BasicSection<double>;
using JetSection = BasicSection<Jet>;

template <class T>
BasicSection<T> operator+(const BasicSection<T>& a, const BasicSection<T>& b) {
  return {a.vec + b.vec, a.cov + b.cov};
}

template <class T>
BasicSection<T> operator-(const BasicSection<T>& a, const BasicSection<T>& b) {
  return {a.vec - b.vec, a.cov - b.cov};
}

template <class T>
BasicSection<T> operator*(double s, const BasicSection<T>& a) {
  return {s * a.vec, s * a.cov};
}

Section values(const JetSection& s);
JetSection constant_section(const Section& s, int n);
Section zero_section(int n);
/// Basis section a of TM + T*M: d_a for a < n, dx^(a-n) otherwise.
Section basis_section(int a, int n);
double max_abs(const Section& s);
double max_abs_difference(const Section& a, const Section& b);

/// Bilinear forms on TM + T*M built from h.
enum class Pairing {
  indefinite,  // -(eta(Y) + beta(X)) / 2
  symplectic,  // -(eta(Y) - beta(X)) / 2
  check,       // h(X, Y) + h(h^-1 eta, h^-1 beta)
};

std::string to_string(Pairing p);

Jet pairing(Pairing p, const MetricAt& h, const JetSection& s, const JetSection& t);
double pairing(Pairing p, const MetricAt& h, const Section& s, const Section& t);

/// The three lifts of a base connection to TM + T*M. All differentiate only
/// along the vector part of the direction.
///   hat:   nabla_X Y + h(nabla_X (h^-1 beta))
///   check: nabla_X Y + nabla_X beta
///   dual:  h^-1(nabla_X (h Y)) + nabla_X beta
enum class LiftKind { hat, check, dual };

/// Coefficient blocks at a point: column a of block(i) is the value of
/// nabla_{d_i} applied to basis_section(a).
struct GenConnectionAt {
  int n = 0;
  std::vector<Matrix<double>> blocks;  // one 2n x 2n matrix per direction

  Matrix<double> vec_vec(int i) const;
  Matrix<double> cov_vec(int i) const;  // vector output from covector input
  Matrix<double> vec_cov(int i) const;  // covector output from vector input
  Matrix<double> cov_cov(int i) const;
};

/// Linear combination of lifts of one base connection with one metric.
class GenConnection {
 public:
  static GenConnection lift(LiftKind kind, const Christoffel& nabla, const MetricAt& h);
  /// (1+a)/2 hat + (1-a)/2 dual.
  static GenConnection alpha(const Christoffel& nabla, const MetricAt& h, double alpha);

  int dim() const { return nabla_.dim(); }
  const Christoffel& base() const { return nabla_; }
  const MetricAt& metric() const { return h_; }

  JetSection apply(const JetVector& X, const JetSection& s) const;
  GenConnectionAt coefficients() const;

 private:
  struct Term {
    double weight;
    LiftKind kind;
  };
  GenConnection(std::vector<Term> terms, Christoffel nabla, MetricAt h)
      : terms_(std::move(terms)), nabla_(std::move(nabla)), h_(std::move(h)) {}

  std::vector<Term> terms_;
  Christoffel nabla_;
  MetricAt h_;
};

/// [X+eta, Y+beta]_nabla = [X,Y] + nabla_X beta - nabla_Y eta.
JetSection nabla_bracket(const Christoffel& nabla, const JetSection& s, const JetSection& t);

/// [s,t] with the base alpha-connection: [X,Y] + nabla^a_X beta - nabla^a_Y eta.
JetSection alpha_bracket(const Christoffel& nabla, const MetricAt& h, double alpha, const JetSection& s,
                         const JetSection& t);
/// [s,t]_nabla - (1-a)/2 {(nabla_X h)(h^-1 beta) - (nabla_Y h)(h^-1 eta)}.
Section alpha_bracket_closed(const Christoffel& nabla, const MetricAt& h, double alpha, const JetSection& s,
                             const JetSection& t);

/// check_nabla_X t / 2 + {h^-1((nabla_X h)(Y)) - (nabla_X h)(h^-1 beta)} / 2.
Section average_connection_closed(const Christoffel& nabla, const MetricAt& h, const JetVector& X,
                                  const JetSection& t);

/// (nabla_X h)(Y, Z) + (nabla_X h)(h^-1 beta, h^-1 gamma).
double hat_nabla_check_h_closed(const Christoffel& nabla, const MetricAt& h, const Vec<double>& X,
                                const Section& t, const Section& u);

/// T(s,t) = D_s t - D_t s - [s,t]_nabla with nabla the base of D.
Section gen_torsion(const GenConnection& D, const JetSection& s, const JetSection& t);

/// Closed form of the torsion of the alpha-connection.
Section gen_torsion_closed(const Christoffel& nabla, const MetricAt& h, double alpha, const Section& s,
                           const Section& t);

/// T^(s,t) = (h^-1((nabla_X h)(Y)) + (nabla_X h)(h^-1 beta)) / 2.
Section T_hat(const Christoffel& nabla, const MetricAt& h, const Section& s, const Section& t);

/// (D grad pairing)(s; t, u) = X(pairing(t,u)) - pairing(D_s t, u) - pairing(t, D_s u).
double gen_nabla_pairing(const GenConnection& D, Pairing p, const JetSection& s, const JetSection& t,
                         const JetSection& u);

/// (d^D pairing)(s,t,u) = (D_s P)(t,u) - (D_t P)(s,u) + P(T(s,t), u).
double gen_d_nabla_pairing(const GenConnection& D, Pairing p, const JetSection& s, const JetSection& t,
                           const JetSection& u);

/// R(s,t)u = D_X D_Y u - D_Y D_X u - D_[X,Y] u for jet fields.
Section gen_curvature(const GenConnection& D, const JetVector& X, const JetVector& Y, const JetSection& u);

/// Curvature of D on basis sections at the point.
class GenCurvatureTensor {
 public:
  explicit GenCurvatureTensor(const GenConnection& D);
  int dim() const { return n_; }
  /// R(X, Y) u for value inputs (only vector parts of the directions matter).
  Section apply(const Vec<double>& X, const Vec<double>& Y, const Section& u) const;

 private:
  int n_ = 0;
  std::vector<Matrix<double>> m_;  // m_[i*n+j] acts on 2n-vectors
};

// Closed forms in terms of the base curvature R of nabla.
Section curvature_hat_closed(const Curvature& R, const MetricAt& h, const Vec<double>& X, const Vec<double>& Y,
                             const Section& u);
Section curvature_dual_closed(const Curvature& R, const MetricAt& h, const Vec<double>& X, const Vec<double>& Y,
                              const Section& u);
/// (1+a)/2 R^ + (1-a)/2 R^* + (1-a^2){T^(t, T^(s,u)) - T^(s, T^(t,u))}.
Section curvature_alpha_combination(const Christoffel& nabla, const MetricAt& h, double alpha,
                                    const Vec<double>& X, const Vec<double>& Y, const Section& u);
/// Expanded display in iterated covariant derivatives of the fields.
Section curvature_alpha_expanded(const Christoffel& nabla, const MetricAt& h, double alpha, const JetVector& X,
                                 const JetVector& Y, const JetSection& u);
/// Same display rewritten in terms of nabla h.
Section curvature_alpha_nabla_h_form(const Christoffel& nabla, const MetricAt& h, double alpha,
                                     const JetVector& X, const JetVector& Y, const JetSection& u);
/// Display valid when nabla h = 0.
Section curvature_alpha_parallel(const Curvature& R, const MetricAt& h, double alpha, const Vec<double>& X,
                                 const Vec<double>& Y, const Section& u);
/// R(X,Y)Z + R(X,Y)gamma.
Section curvature_base_lift(const Curvature& R, const Vec<double>& X, const Vec<double>& Y, const Section& u);

/// h-orthonormal frame (rows) as jet fields, from Gram-Schmidt on `start`.
JetMatrix frame_jets(const MetricAt& h, const Matrix<double>& start);

/// Ricci tensor of the curvature R over TM + T*M on basis sections (2n x 2n),
/// as half the sum over the frame (E_a + hE_a)/sqrt2, (E_a - hE_a)/sqrt2.
Matrix<double> gen_ricci_frame_sum(const GenCurvatureTensor& R, const MetricAt& h, const Matrix<double>& E);
/// Reduced sum: sum_a check_h(R(E_a, .) ., E_a).
Matrix<double> gen_ricci_reduced(const GenCurvatureTensor& R, const MetricAt& h, const Matrix<double>& E);
/// Closed form for symmetric h, on the vector block (n x n, Y = d_j, Z = d_k).
Matrix<double> gen_ricci_closed(const Christoffel& nabla, const MetricAt& h, double alpha, const JetMatrix& E);
/// Same, rewritten in terms of nabla h.
Matrix<double> gen_ricci_nabla_h_form(const Christoffel& nabla, const MetricAt& h, double alpha,
                                      const JetMatrix& E);
/// Full contraction of a 2n x 2n Ricci matrix with the inverse of check_h.
double gen_scalar(const Matrix<double>& ricci, const MetricAt& h);
/// sum_a h(R(Y,E_a)E_a, Z) - h(R(Z,E_a)E_a, Y).
Matrix<double> equiaffine_obstruction(const Curvature& R, const MetricAt& h, const Matrix<double>& E);

}  // namespace genverify
