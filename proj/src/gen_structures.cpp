#include "genverify/gen_structures.hpp"

#include <cmath>

#include "genverify/errors.hpp"

namespace genverify {

namespace {

Vec<double> unit(int i, int n) {
  Vec<double> e(n, 0.0);
  e[i] = 1.0;
  return e;
}

// (nabla_X J) V from the value tensor dJ(i, k, j).
Vec<double> apply_dJ(const Tensor3d& dJ, const Vec<double>& X, const Vec<double>& V) {
  const int n = dJ.dim();
  Vec<double> r(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) r[k] += X[i] * dJ(i, k, j) * V[j];
  return r;
}

// ((nabla_X J*) beta)(W) = beta((nabla_X J) W).
Vec<double> apply_dJ_star(const Tensor3d& dJ, const Vec<double>& X, const Vec<double>& beta) {
  const int n = dJ.dim();
  Vec<double> r(n, 0.0);
  for (int w = 0; w < n; ++w) r[w] = dot(beta, apply_dJ(dJ, X, unit(w, n)));
  return r;
}

Vec<double> nh(const Tensor3d& dh, const Vec<double>& X, const Vec<double>& Y) {
  const int n = dh.dim();
  Vec<double> r(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) r[k] += X[i] * Y[j] * dh(i, j, k);
  return r;
}

}  // namespace

std::string to_string(StructureKind k) {
  switch (k) {
    case StructureKind::product:
      return "product";
    case StructureKind::complex:
      return "complex";
    case StructureKind::metallic:
      return "metallic";
  }
  return "product";
}

StructureKind structure_kind_from_string(const std::string& s) {
  if (s == "product") return StructureKind::product;
  if (s == "complex") return StructureKind::complex;
  if (s == "metallic") return StructureKind::metallic;
  throw UsageError("unknown structure kind '" + s + "'");
}

JetSection GenOperator::apply(const JetSection& s) const { return {A * s.vec + B * s.cov, C * s.vec + D * s.cov}; }

Section GenOperator::apply(const Section& s) const {
  return {values(A) * s.vec + values(B) * s.cov, values(C) * s.vec + values(D) * s.cov};
}

Matrix<double> GenOperator::matrix() const {
  const int n = dim();
  Matrix<double> m(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m(i, j) = A(i, j).value();
      m(i, n + j) = B(i, j).value();
      m(n + i, j) = C(i, j).value();
      m(n + i, n + j) = D(i, j).value();
    }
  }
  return m;
}

double GenOperator::identity_defect() const {
  const Matrix<double> m = matrix();
  const int N = m.rows();
  Matrix<double> target = Matrix<double>::identity(N);
  if (kind == StructureKind::complex) target = -1.0 * target;
  if (kind == StructureKind::metallic) target = p * m + q * target;
  return max_abs(m * m - target);
}

double h_symmetry_defect(const MetricAt& h, const JetMatrix& J) {
  const Matrix<double> hv = values(h.h), Jv = values(J);
  return max_abs(transpose(Jv) * hv - hv * Jv);
}

GenOperator build_structure(StructureKind kind, const MetricAt& h, const JetMatrix& J, double p, double q,
                            double tol) {
  if (h.kind != SymmetryKind::symmetric) throw ValidationError("generalized structures need a symmetric h");
  const int n = h.dim();
  if (J.rows() != n || J.cols() != n) throw UsageError("J has the wrong shape");
  const double scale = 1.0 + max_abs(values(h.h)) * max_abs(values(J));
  if (h_symmetry_defect(h, J) > tol * scale) throw ValidationError("J is not h-symmetric at " + format_point(h.x));
  const JetMatrix I = JetMatrix::identity(n);
  const JetMatrix J2 = J * J;
  const JetMatrix S = sharp_matrix(h.h_inv);
  GenOperator op;
  op.kind = kind;
  op.C = flat_matrix(h.h);
  switch (kind) {
    case StructureKind::product:
      op.A = J;
      op.B = (I - J2) * S;
      op.D = -1.0 * transpose(J);
      break;
    case StructureKind::complex:
      op.A = J;
      op.B = -1.0 * ((I + J2) * S);
      op.D = -1.0 * transpose(J);
      break;
    case StructureKind::metallic:
      op.p = p;
      op.q = q;
      op.A = p * I - J;
      op.B = (p * J + q * I - J2) * S;
      op.D = transpose(J);
      break;
  }
  return op;
}

Section nijenhuis(const GenOperator& J, const Christoffel& nabla, const MetricAt& h, std::optional<double> alpha,
                  const JetSection& s, const JetSection& t) {
  auto br = [&](const JetSection& a, const JetSection& b) {
    return alpha ? values(alpha_bracket(nabla, h, *alpha, a, b)) : values(nabla_bracket(nabla, a, b));
  };
  const JetSection Js = J.apply(s), Jt = J.apply(t);
  return br(Js, Jt) - J.apply(br(Js, t)) - J.apply(br(s, Jt)) + J.apply(J.apply(br(s, t)));
}

std::vector<JetSection> nijenhuis_test_sections(const MetricAt& h) {
  const int n = h.dim();
  std::vector<JetSection> out;
  for (int a = 0; a < 2 * n; ++a) out.push_back(constant_section(basis_section(a, n), n));
  for (int i = 0; i < n; ++i) {
    JetSection s{constant_vector(Vec<double>(n, 0.0), n), flat(h.h, constant_vector(unit(i, n), n))};
    out.push_back(s);
  }
  return out;
}

NijenhuisGap nijenhuis_alpha_gap(const GenOperator& J, const Christoffel& nabla, const MetricAt& h, double alpha) {
  const std::vector<JetSection> secs = nijenhuis_test_sections(h);
  NijenhuisGap g;
  for (const JetSection& s : secs) {
    for (const JetSection& t : secs) {
      const Section na = nijenhuis(J, nabla, h, alpha, s, t);
      const Section n0 = nijenhuis(J, nabla, h, std::nullopt, s, t);
      g.gap = std::max(g.gap, max_abs_difference(na, n0));
      g.scale = std::max({g.scale, max_abs(na), max_abs(n0)});
    }
  }
  return g;
}

Section gen_covdiff(const GenConnection& Dc, const GenOperator& J, const JetVector& X, const JetSection& t) {
  return values(Dc.apply(X, J.apply(t))) - J.apply(values(Dc.apply(X, t)));
}

Section covdiff_hat_display(const GenOperator& Jh, const Christoffel& nabla, const MetricAt& h, const JetMatrix& J,
                            const Vec<double>& X, const Section& t) {
  const Tensor3d dJ = nabla_J(nabla, J);
  const Matrix<double> Jv = values(J), hv = values(h.h), hi = values(h.h_inv);
  const Vec<double> Sb = sharp(hi, t.cov);
  const Vec<double> dJSb = apply_dJ(dJ, X, Sb);
  const Vec<double> common = -1.0 * apply_dJ(dJ, X, Jv * Sb) - Jv * dJSb;
  if (Jh.kind == StructureKind::metallic) {
    return {-1.0 * apply_dJ(dJ, X, t.vec) + common + Jh.p * dJSb, -1.0 * flat(hv, dJSb)};
  }
  return {apply_dJ(dJ, X, t.vec) + common, -1.0 * flat(hv, dJSb)};
}

Section covdiff_dual_display(const GenOperator& Jh, const Christoffel& nabla, const MetricAt& h, const JetMatrix& J,
                             const Vec<double>& X, const Section& t) {
  const Tensor3d dJ = nabla_J(nabla, J);
  const Matrix<double> Jt = transpose(values(J)), hv = values(h.h), hi = values(h.h_inv);
  const Vec<double> dJb = apply_dJ_star(dJ, X, t.cov);
  const Vec<double> common =
      -1.0 * sharp(hi, apply_dJ_star(dJ, X, Jt * t.cov)) - sharp(hi, Jt * dJb);
  const Vec<double> first = sharp(hi, apply_dJ_star(dJ, X, flat(hv, t.vec)));
  if (Jh.kind == StructureKind::metallic) {
    return {-1.0 * first + common + Jh.p * sharp(hi, dJb), dJb};
  }
  return {first + common, -1.0 * dJb};
}

double nabla_h_J_residual(const MetricAt& h, const Christoffel& nabla, const JetMatrix& J) {
  const int n = h.dim();
  const Tensor3d dh = nabla_h(nabla, h);
  const Tensor3d F = F_tensor(h, nabla, J);
  const Matrix<double> Jv = values(J);
  double m = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vec<double> X = unit(i, n), Y = unit(j, n);
      const Vec<double> lhs = nh(dh, X, Jv * Y) - transpose(Jv) * nh(dh, X, Y);
      for (int w = 0; w < n; ++w) m = std::max(m, std::abs(lhs[w] + F(i, j, w) - F(i, w, j)));
    }
  }
  return m;
}

double dual_nabla_J_residual(const MetricAt& h, const Christoffel& nabla, const JetMatrix& J) {
  const int n = h.dim();
  const Tensor3d dJ = nabla_J(nabla, J);
  const Tensor3d dJs = nabla_J(dual_connection(nabla, h), J);
  const Tensor3d F = F_tensor(h, nabla, J);
  const Matrix<double> hi = values(h.h_inv);
  double m = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Vec<double> c(n, 0.0);
      for (int w = 0; w < n; ++w) c[w] = F(i, w, j) - F(i, j, w);
      const Vec<double> corr = sharp(hi, c);
      for (int k = 0; k < n; ++k) m = std::max(m, std::abs(dJs(i, k, j) - dJ(i, k, j) - corr[k]));
    }
  }
  return m;
}

}  // namespace genverify
