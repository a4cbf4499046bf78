#pragma once

#include <optional>
#include <string>
#include <vector>

#include "genverify/gen_bundle.hpp"

namespace genverify {

enum class StructureKind { product, complex, metallic };

std::string to_string(StructureKind k);
StructureKind structure_kind_from_string(const std::string& s);

/// Endomorphism of TM + T*M as four jet blocks acting on (vec, cov):
///   vec' = A vec + B cov,  cov' = C vec + D cov.
/// product:  [[J, (I-J^2) h^-1], [h, -J*]]
/// complex:  [[J, -(I+J^2) h^-1], [h, -J*]]
/// metallic: [[-J+pI, (-J^2+pJ+qI) h^-1], [h, J*]]
/// with (J* eta)(X) = eta(JX).
struct GenOperator {
  StructureKind kind = StructureKind::product;
  double p = 0.0;
  double q = 0.0;
  JetMatrix A, B, C, D;

  int dim() const { return A.rows(); }
  JetSection apply(const JetSection& s) const;
  Section apply(const Section& s) const;
  /// 2n x 2n value matrix.
  Matrix<double> matrix() const;
  /// max |J^2 - target| with target I, -I or pJ + qI.
  double identity_defect() const;
};

/// Requires h symmetric and J h-symmetric within tol (relative to 1 + |h||J|);
/// throws ValidationError otherwise. p and q are used by the metallic kind only.
GenOperator build_structure(StructureKind kind, const MetricAt& h, const JetMatrix& J, double p = 1.0,
                            double q = 1.0, double tol = 1e-9);

/// max |h(JX,Y) - h(X,JY)| over basis pairs.
double h_symmetry_defect(const MetricAt& h, const JetMatrix& J);

/// Nijenhuis tensor with respect to [,]_nabla (no alpha) or [,]_{nabla^(alpha)}:
/// [Js,Jt] - J[Js,t] - J[s,Jt] + J(J[s,t]).
Section nijenhuis(const GenOperator& J, const Christoffel& nabla, const MetricAt& h, std::optional<double> alpha,
                  const JetSection& s, const JetSection& t);

/// Sections used as Nijenhuis arguments: the 2n constant coordinate sections
/// followed by the n sections 0 + h(d_i).
std::vector<JetSection> nijenhuis_test_sections(const MetricAt& h);

struct NijenhuisGap {
  double gap = 0.0;    // max over section pairs of |N^alpha - N|
  double scale = 0.0;  // max of |N^alpha|, |N| over the same pairs
};
NijenhuisGap nijenhuis_alpha_gap(const GenOperator& J, const Christoffel& nabla, const MetricAt& h, double alpha);

/// (D_X J)(t) = D_X(J t) - J(D_X t), computed from the fields.
Section gen_covdiff(const GenConnection& Dc, const GenOperator& J, const JetVector& X, const JetSection& t);

/// Closed forms of (nabla^_X J)(t) and (nabla^*_X J)(t) in terms of nabla J,
/// as displayed for each structure kind.
Section covdiff_hat_display(const GenOperator& Jh, const Christoffel& nabla, const MetricAt& h, const JetMatrix& J,
                            const Vec<double>& X, const Section& t);
Section covdiff_dual_display(const GenOperator& Jh, const Christoffel& nabla, const MetricAt& h, const JetMatrix& J,
                             const Vec<double>& X, const Section& t);

/// max over basis X, Y of |(nabla_X h)(JY) - J*((nabla_X h)(Y)) + F(X,Y,.) - F(X,.,Y)|.
double nabla_h_J_residual(const MetricAt& h, const Christoffel& nabla, const JetMatrix& J);

/// max over basis X, Y of |(nabla*_X J)Y - (nabla_X J)Y - h^-1{F(X,.,Y) - F(X,Y,.)}|.
double dual_nabla_J_residual(const MetricAt& h, const Christoffel& nabla, const JetMatrix& J);

}  // namespace genverify
