#include "genverify/base_geometry.hpp"

#include <cmath>

#include "genverify/errors.hpp"

namespace genverify {

Vec<double> Curvature::apply(const Vec<double>& X, const Vec<double>& Y, const Vec<double>& Z) const {
  Vec<double> r(n_, 0.0);
  for (int l = 0; l < n_; ++l)
    for (int k = 0; k < n_; ++k)
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) r[l] += (*this)(l, k, i, j) * Z[k] * X[i] * Y[j];
  return r;
}

Vec<double> Curvature::apply_covector(const Vec<double>& X, const Vec<double>& Y, const Vec<double>& g) const {
  Vec<double> r(n_, 0.0);
  for (int w = 0; w < n_; ++w) {
    Vec<double> e(n_, 0.0);
    e[w] = 1.0;
    const Vec<double> RW = apply(X, Y, e);
    for (int l = 0; l < n_; ++l) r[w] -= g[l] * RW[l];
  }
  return r;
}

Christoffel::Christoffel(int n) : n_(n), c_(n * n * n, Jet(0.0)) {}

JetMatrix Christoffel::matrix(int i) const {
  JetMatrix A(n_, n_);
  for (int k = 0; k < n_; ++k)
    for (int j = 0; j < n_; ++j) A(k, j) = (*this)(k, i, j);
  return A;
}

Christoffel zero_connection(int n) { return Christoffel(n); }

Christoffel explicit_connection(const FieldSpec& gamma, std::span<const double> x) {
  if (gamma.contra != 1 || gamma.co != 2) throw UsageError("connection coefficients must be a (1,2) array");
  const std::vector<Jet> c = eval_field(gamma, x);
  const int n = gamma.n;
  Christoffel G(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) G(k, i, j) = c[(k * n + i) * n + j];
  return G;
}

Christoffel levi_civita(const MetricAt& g) {
  if (g.kind != SymmetryKind::symmetric) throw UsageError("Levi-Civita connection needs a symmetric metric");
  const int n = g.dim();
  Christoffel G(n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        Jet s(0.0);
        for (int m = 0; m < n; ++m) {
          s += g.h_inv(k, m) * (partial(g.h(m, j), i) + partial(g.h(m, i), j) - partial(g.h(i, j), m));
        }
        G(k, i, j) = 0.5 * s;
      }
    }
  }
  return G;
}

Tensor3<Jet> nabla_h_jets(const Christoffel& nabla, const MetricAt& h) {
  const int n = h.dim();
  Tensor3<Jet> t(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        Jet s = partial(h.h(j, k), i);
        for (int l = 0; l < n; ++l) s -= nabla(l, i, j) * h.h(l, k) + nabla(l, i, k) * h.h(j, l);
        t(i, j, k) = s;
      }
    }
  }
  return t;
}

Tensor3d nabla_h(const Christoffel& nabla, const MetricAt& h) {
  const int n = h.dim();
  Tensor3d r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = h.dh(i, j, k);
        for (int l = 0; l < n; ++l) s -= nabla.value(l, i, j) * h.value(l, k) + nabla.value(l, i, k) * h.value(j, l);
        r(i, j, k) = s;
      }
  return r;
}

Christoffel dual_connection(const Christoffel& nabla, const MetricAt& h) {
  if (h.kind == SymmetryKind::general) {
    throw ValidationError("dual connection needs h symmetric or skew");
  }
  const int n = h.dim();
  const Tensor3<Jet> dh = nabla_h_jets(nabla, h);
  Christoffel G = nabla;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int m = 0; m < n; ++m) G(k, i, j) += h.h_inv(k, m) * dh(i, m, j);
  return G;
}

Christoffel alpha_connection(const Christoffel& nabla, const Christoffel& other, double alpha) {
  return 0.5 * (1.0 + alpha) * nabla + 0.5 * (1.0 - alpha) * other;
}

Christoffel operator+(const Christoffel& a, const Christoffel& b) {
  const int n = a.dim();
  if (b.dim() != n) throw UsageError("connections of different dimension");
  Christoffel r(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r(k, i, j) = a(k, i, j) + b(k, i, j);
  return r;
}

Christoffel operator-(const Christoffel& a, const Christoffel& b) { return a + (-1.0) * b; }

Christoffel operator*(double s, const Christoffel& a) {
  const int n = a.dim();
  Christoffel r(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r(k, i, j) = s * a(k, i, j);
  return r;
}

double max_abs_difference(const Christoffel& a, const Christoffel& b) {
  double m = 0.0;
  const int n = a.dim();
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m = std::max(m, std::abs(a.value(k, i, j) - b.value(k, i, j)));
  return m;
}

Tensor3d torsion(const Christoffel& nabla) {
  const int n = nabla.dim();
  Tensor3d T(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) T(k, i, j) = nabla.value(k, i, j) - nabla.value(k, j, i);
  return T;
}

Tensor3d d_nabla_h(const Christoffel& nabla, const MetricAt& h) {
  const int n = h.dim();
  const Tensor3d dh = nabla_h(nabla, h);
  const Tensor3d T = torsion(nabla);
  Tensor3d r(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        double s = dh(i, j, k) - dh(j, i, k);
        for (int l = 0; l < n; ++l) s += T(l, i, j) * h.value(l, k);
        r(i, j, k) = s;
      }
    }
  }
  return r;
}

Curvature curvature(const Christoffel& G) {
  const int n = G.dim();
  Curvature R(n);
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          double s = G(l, j, k).grad(i) - G(l, i, k).grad(j);
          for (int m = 0; m < n; ++m) s += G.value(l, i, m) * G.value(m, j, k) - G.value(l, j, m) * G.value(m, i, k);
          R(l, k, i, j) = s;
        }
      }
    }
  }
  return R;
}

Matrix<double> ricci_base(const Christoffel& nabla, const MetricAt& h) {
  if (h.kind != SymmetryKind::symmetric) throw UsageError("Ricci tensor needs a symmetric metric");
  const int n = h.dim();
  const Curvature R = curvature(nabla);
  const Matrix<double> hv = values(h.h);
  const Matrix<double> E = orthonormal_frame(hv, h.x);
  Matrix<double> ric(n, n);
  for (int a = 0; a < n; ++a) {
    Vec<double> Ea(n);
    for (int i = 0; i < n; ++i) Ea[i] = E(a, i);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        Vec<double> Y(n, 0.0), Z(n, 0.0);
        Y[j] = 1.0;
        Z[k] = 1.0;
        ric(j, k) += bilinear(hv, R.apply(Ea, Y, Z), Ea);
      }
    }
  }
  return ric;
}

double scalar_base(const Matrix<double>& ricci, const MetricAt& h) {
  double s = 0.0;
  for (int j = 0; j < h.dim(); ++j)
    for (int k = 0; k < h.dim(); ++k) s += h.inv(j, k) * ricci(j, k);
  return s;
}

Tensor3<Jet> nabla_J_jets(const Christoffel& nabla, const JetMatrix& J) {
  const int n = nabla.dim();
  Tensor3<Jet> t(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < n; ++j) {
        Jet s = partial(J(k, j), i);
        for (int m = 0; m < n; ++m) s += nabla(k, i, m) * J(m, j) - J(k, m) * nabla(m, i, j);
        t(i, k, j) = s;
      }
    }
  }
  return t;
}

Tensor3d nabla_J(const Christoffel& nabla, const JetMatrix& J) {
  const int n = nabla.dim();
  Tensor3d r(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        double s = J(k, j).grad(i);
        for (int m = 0; m < n; ++m) s += nabla.value(k, i, m) * J(m, j).value() - J(k, m).value() * nabla.value(m, i, j);
        r(i, k, j) = s;
      }
  return r;
}

Tensor3d F_tensor(const MetricAt& h, const Christoffel& nabla, const JetMatrix& J) {
  const int n = h.dim();
  const Tensor3d dJ = nabla_J(nabla, J);
  Tensor3d F(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) F(i, j, k) += dJ(i, m, j) * h.value(m, k);
  return F;
}

FConditions F_conditions(const MetricAt& h, const Christoffel& nabla, const JetMatrix& J) {
  const int n = h.dim();
  FConditions c;
  c.F = F_tensor(h, nabla, J);
  c.C1 = Tensor3d(n);
  c.C2 = Tensor3d(n);
  c.dJ = Tensor3d(n);
  const Tensor3d nJ = nabla_J(nabla, J);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        c.C1(i, j, k) = c.F(i, j, k) + c.F(j, k, i) - c.F(i, k, j) - c.F(j, i, k);
        c.C2(i, j, k) = c.F(j, k, i) - c.F(i, k, j);
        c.dJ(k, i, j) = nJ(i, k, j) - nJ(j, k, i);
      }
    }
  }
  return c;
}

MetricAt twin_metric(const MetricAt& g, const JetMatrix& J) {
  const int n = g.dim();
  JetMatrix gt(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < n; ++m) gt(i, j) += g.h(i, m) * J(m, j);
  return make_metric(gt, SymmetryKind::symmetric, g.x, 1e-10);
}

Christoffel twin_dual(const Christoffel& lc, const JetMatrix& J) {
  const int n = lc.dim();
  const Tensor3<Jet> dJ = nabla_J_jets(lc, J);
  const JetMatrix Jinv = inverse(J);
  Christoffel G = lc;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int m = 0; m < n; ++m) G(k, i, j) += Jinv(k, m) * dJ(i, m, j);
  return G;
}

Christoffel twin_alpha(const Christoffel& lc, const JetMatrix& J, double alpha) {
  return alpha_connection(lc, twin_dual(lc, J), alpha);
}

Christoffel twin_alpha_display(const Christoffel& lc, const JetMatrix& J, double alpha) {
  const Christoffel diff = twin_dual(lc, J) - lc;
  return lc - 0.5 * (1.0 - alpha) * diff;
}

double metallic_defect(const JetMatrix& J, double p, double q) {
  const Matrix<double> Jv = values(J);
  const int n = Jv.rows();
  const Matrix<double> J2 = Jv * Jv;
  double m = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m = std::max(m, std::abs(J2(i, j) - p * Jv(i, j) - (i == j ? q : 0.0)));
  return m;
}

MetallicObstruction metallic_obstruction(const Christoffel& nabla, const JetMatrix& J, double p, double q,
                                         double tol) {
  if (metallic_defect(J, p, q) > tol) throw ValidationError("J does not satisfy J^2 = pJ + qI");
  const int n = nabla.dim();
  const Tensor3d dJ = nabla_J(nabla, J);
  const Matrix<double> Jv = values(J);
  MetallicObstruction o{Tensor3d(n), Tensor3d(n)};
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < n; ++j) {
        double comm = 0.0, closed = p * dJ(i, k, j);
        for (int m = 0; m < n; ++m) {
          comm += dJ(i, k, m) * Jv(m, j) - Jv(k, m) * dJ(i, m, j);
          closed -= 2.0 * Jv(k, m) * dJ(i, m, j);
        }
        o.commutator(k, i, j) = comm;
        o.closed(k, i, j) = closed;
      }
    }
  }
  return o;
}

Jet derivative_along(const JetVector& X, const Jet& f) {
  Jet s(0.0);
  for (int i = 0; i < static_cast<int>(X.size()); ++i) {
    if (!X[i].is_zero()) s += X[i] * partial(f, i);
  }
  return s;
}

JetVector covariant_vector(const Christoffel& G, const JetVector& X, const JetVector& Y) {
  const int n = G.dim();
  JetVector r(n, Jet(0.0));
  for (int k = 0; k < n; ++k) {
    Jet s = derivative_along(X, Y[k]);
    for (int i = 0; i < n; ++i) {
      if (X[i].is_zero()) continue;
      for (int j = 0; j < n; ++j) {
        if (!Y[j].is_zero()) s += X[i] * G(k, i, j) * Y[j];
      }
    }
    r[k] = s;
  }
  return r;
}

JetVector covariant_covector(const Christoffel& G, const JetVector& X, const JetVector& beta) {
  const int n = G.dim();
  JetVector r(n, Jet(0.0));
  for (int j = 0; j < n; ++j) {
    Jet s = derivative_along(X, beta[j]);
    for (int i = 0; i < n; ++i) {
      if (X[i].is_zero()) continue;
      for (int m = 0; m < n; ++m) {
        if (!beta[m].is_zero()) s -= X[i] * G(m, i, j) * beta[m];
      }
    }
    r[j] = s;
  }
  return r;
}

JetVector lie_bracket(const JetVector& X, const JetVector& Y) {
  const int n = static_cast<int>(X.size());
  JetVector r(n, Jet(0.0));
  for (int k = 0; k < n; ++k) r[k] = derivative_along(X, Y[k]) - derivative_along(Y, X[k]);
  return r;
}

JetVector nabla_h_apply(const Christoffel& nabla, const MetricAt& h, const JetVector& X, const JetVector& Y) {
  return covariant_covector(nabla, X, flat(h.h, Y)) - flat(h.h, covariant_vector(nabla, X, Y));
}

JetVector nabla_J_apply(const Christoffel& nabla, const JetMatrix& J, const JetVector& X, const JetVector& Y) {
  return covariant_vector(nabla, X, J * Y) - J * covariant_vector(nabla, X, Y);
}

}  // namespace genverify
