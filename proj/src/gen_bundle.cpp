#include "genverify/gen_bundle.hpp"

#include <cmath>

#include "genverify/errors.hpp"

namespace genverify {

namespace {

Vec<double> unit(int i, int n) {
  Vec<double> e(n, 0.0);
  e[i] = 1.0;
  return e;
}

Vec<double> stack(const Section& s) {
  Vec<double> v = s.vec;
  v.insert(v.end(), s.cov.begin(), s.cov.end());
  return v;
}

Section unstack(const Vec<double>& v, int n) {
  return {Vec<double>(v.begin(), v.begin() + n), Vec<double>(v.begin() + n, v.end())};
}

// (nabla_X h)(Y, .) from the value tensor dh(i, j, k).
Vec<double> nh(const Tensor3d& dh, const Vec<double>& X, const Vec<double>& Y) {
  const int n = dh.dim();
  Vec<double> r(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) r[k] += X[i] * Y[j] * dh(i, j, k);
  return r;
}

Vec<double> torsion_apply(const Tensor3d& T, const Vec<double>& X, const Vec<double>& Y) {
  const int n = T.dim();
  Vec<double> r(n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r[k] += T(k, i, j) * X[i] * Y[j];
  return r;
}

// h(R(X,Y) ., Z) as a covector.
Vec<double> h_of_R_slot(const Curvature& R, const Matrix<double>& hv, const Vec<double>& X, const Vec<double>& Y,
                        const Vec<double>& Z) {
  const int n = R.dim();
  Vec<double> r(n, 0.0);
  for (int w = 0; w < n; ++w) r[w] = bilinear(hv, R.apply(X, Y, unit(w, n)), Z);
  return r;
}

JetSection lift_apply(LiftKind kind, const Christoffel& G, const MetricAt& h, const JetVector& X,
                      const JetSection& s) {
  switch (kind) {
    case LiftKind::hat:
      return {covariant_vector(G, X, s.vec), flat(h.h, covariant_vector(G, X, sharp(h.h_inv, s.cov)))};
    case LiftKind::check:
      return {covariant_vector(G, X, s.vec), covariant_covector(G, X, s.cov)};
    case LiftKind::dual:
      return {sharp(h.h_inv, covariant_covector(G, X, flat(h.h, s.vec))), covariant_covector(G, X, s.cov)};
  }
  throw UsageError("unknown lift");
}

JetVector constant_jets(const Vec<double>& v, int n) { return constant_vector(v, n); }

}  // namespace

Section values(const JetSection& s) { return {values(s.vec), values(s.cov)}; }

JetSection constant_section(const Section& s, int n) { return {constant_vector(s.vec, n), constant_vector(s.cov, n)}; }

Section zero_section(int n) { return {Vec<double>(n, 0.0), Vec<double>(n, 0.0)}; }

Section basis_section(int a, int n) {
  if (a < 0 || a >= 2 * n) throw UsageError("basis section index out of range");
  Section s = zero_section(n);
  if (a < n)
    s.vec[a] = 1.0;
  else
    s.cov[a - n] = 1.0;
  return s;
}

double max_abs(const Section& s) { return std::max(max_abs(s.vec), max_abs(s.cov)); }

double max_abs_difference(const Section& a, const Section& b) { return max_abs(a - b); }

std::string to_string(Pairing p) {
  switch (p) {
    case Pairing::indefinite:
      return "indefinite";
    case Pairing::symplectic:
      return "symplectic";
    case Pairing::check:
      return "check_h";
  }
  return "check_h";
}

Jet pairing(Pairing p, const MetricAt& h, const JetSection& s, const JetSection& t) {
  switch (p) {
    case Pairing::indefinite:
      return -0.5 * (dot(s.cov, t.vec) + dot(t.cov, s.vec));
    case Pairing::symplectic:
      return -0.5 * (dot(s.cov, t.vec) - dot(t.cov, s.vec));
    case Pairing::check:
      return bilinear(h.h, s.vec, t.vec) + bilinear(h.h, sharp(h.h_inv, s.cov), sharp(h.h_inv, t.cov));
  }
  throw UsageError("unknown pairing");
}

double pairing(Pairing p, const MetricAt& h, const Section& s, const Section& t) {
  switch (p) {
    case Pairing::indefinite:
      return -0.5 * (dot(s.cov, t.vec) + dot(t.cov, s.vec));
    case Pairing::symplectic:
      return -0.5 * (dot(s.cov, t.vec) - dot(t.cov, s.vec));
    case Pairing::check: {
      const Matrix<double> hv = values(h.h), hi = values(h.h_inv);
      return bilinear(hv, s.vec, t.vec) + bilinear(hv, sharp(hi, s.cov), sharp(hi, t.cov));
    }
  }
  throw UsageError("unknown pairing");
}

namespace {

Matrix<double> sub_block(const Matrix<double>& m, int r0, int c0, int n) {
  Matrix<double> b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = m(r0 + i, c0 + j);
  return b;
}

}  // namespace

Matrix<double> GenConnectionAt::vec_vec(int i) const { return sub_block(blocks.at(i), 0, 0, n); }
Matrix<double> GenConnectionAt::cov_vec(int i) const { return sub_block(blocks.at(i), 0, n, n); }
Matrix<double> GenConnectionAt::vec_cov(int i) const { return sub_block(blocks.at(i), n, 0, n); }
Matrix<double> GenConnectionAt::cov_cov(int i) const { return sub_block(blocks.at(i), n, n, n); }

GenConnection GenConnection::lift(LiftKind kind, const Christoffel& nabla, const MetricAt& h) {
  if (nabla.dim() != h.dim()) throw UsageError("connection and metric dimensions differ");
  return GenConnection({{1.0, kind}}, nabla, h);
}

GenConnection GenConnection::alpha(const Christoffel& nabla, const MetricAt& h, double a) {
  if (nabla.dim() != h.dim()) throw UsageError("connection and metric dimensions differ");
  return GenConnection({{0.5 * (1.0 + a), LiftKind::hat}, {0.5 * (1.0 - a), LiftKind::dual}}, nabla, h);
}

JetSection GenConnection::apply(const JetVector& X, const JetSection& s) const {
  const int n = dim();
  JetSection r{JetVector(n, Jet(0.0)), JetVector(n, Jet(0.0))};
  for (const Term& t : terms_) {
    if (t.weight == 0.0) continue;
    const JetSection d = lift_apply(t.kind, nabla_, h_, X, s);
    r.vec = r.vec + t.weight * d.vec;
    r.cov = r.cov + t.weight * d.cov;
  }
  return r;
}

GenConnectionAt GenConnection::coefficients() const {
  const int n = dim();
  GenConnectionAt c;
  c.n = n;
  for (int i = 0; i < n; ++i) {
    Matrix<double> m(2 * n, 2 * n);
    const JetVector X = constant_jets(unit(i, n), n);
    for (int a = 0; a < 2 * n; ++a) {
      const Vec<double> col = stack(values(apply(X, constant_section(basis_section(a, n), n))));
      for (int r = 0; r < 2 * n; ++r) m(r, a) = col[r];
    }
    c.blocks.push_back(std::move(m));
  }
  return c;
}

JetSection nabla_bracket(const Christoffel& nabla, const JetSection& s, const JetSection& t) {
  return {lie_bracket(s.vec, t.vec),
          covariant_covector(nabla, s.vec, t.cov) - covariant_covector(nabla, t.vec, s.cov)};
}

JetSection alpha_bracket(const Christoffel& nabla, const MetricAt& h, double alpha, const JetSection& s,
                         const JetSection& t) {
  const Christoffel na = alpha_connection(nabla, dual_connection(nabla, h), alpha);
  return {lie_bracket(s.vec, t.vec), covariant_covector(na, s.vec, t.cov) - covariant_covector(na, t.vec, s.cov)};
}

Section alpha_bracket_closed(const Christoffel& nabla, const MetricAt& h, double alpha, const JetSection& s,
                             const JetSection& t) {
  const Section b = values(nabla_bracket(nabla, s, t));
  const Tensor3d dh = nabla_h(nabla, h);
  const Matrix<double> hi = values(h.h_inv);
  const Section sv = values(s), tv = values(t);
  const Vec<double> corr = nh(dh, sv.vec, sharp(hi, tv.cov)) - nh(dh, tv.vec, sharp(hi, sv.cov));
  return {b.vec, b.cov - 0.5 * (1.0 - alpha) * corr};
}

Section average_connection_closed(const Christoffel& nabla, const MetricAt& h, const JetVector& X,
                                  const JetSection& t) {
  const Section chk = values(lift_apply(LiftKind::check, nabla, h, X, t));
  const Tensor3d dh = nabla_h(nabla, h);
  const Matrix<double> hi = values(h.h_inv);
  const Vec<double> Xv = values(X);
  const Section tv = values(t);
  const Section corr{sharp(hi, nh(dh, Xv, tv.vec)), -nh(dh, Xv, sharp(hi, tv.cov))};
  return 0.5 * chk + 0.5 * corr;
}

double hat_nabla_check_h_closed(const Christoffel& nabla, const MetricAt& h, const Vec<double>& X,
                                const Section& t, const Section& u) {
  const Tensor3d dh = nabla_h(nabla, h);
  const Matrix<double> hi = values(h.h_inv);
  return dot(nh(dh, X, t.vec), u.vec) + dot(nh(dh, X, sharp(hi, t.cov)), sharp(hi, u.cov));
}

Section gen_torsion(const GenConnection& D, const JetSection& s, const JetSection& t) {
  const JetSection a = D.apply(s.vec, t);
  const JetSection b = D.apply(t.vec, s);
  const JetSection br = nabla_bracket(D.base(), s, t);
  return values(a) - values(b) - values(br);
}

Section gen_torsion_closed(const Christoffel& nabla, const MetricAt& h, double alpha, const Section& s,
                           const Section& t) {
  const Tensor3d dh = nabla_h(nabla, h);
  const Tensor3d T = torsion(nabla);
  const Matrix<double> hi = values(h.h_inv);
  const Vec<double>&X = s.vec, &Y = t.vec;
  const Vec<double> vec =
      torsion_apply(T, X, Y) + 0.5 * (1.0 - alpha) * (sharp(hi, nh(dh, X, Y)) - sharp(hi, nh(dh, Y, X)));
  const Vec<double> cov = -0.5 * (1.0 + alpha) * (nh(dh, X, sharp(hi, t.cov)) - nh(dh, Y, sharp(hi, s.cov)));
  return {vec, cov};
}

Section T_hat(const Christoffel& nabla, const MetricAt& h, const Section& s, const Section& t) {
  const Tensor3d dh = nabla_h(nabla, h);
  const Matrix<double> hi = values(h.h_inv);
  return {0.5 * sharp(hi, nh(dh, s.vec, t.vec)), 0.5 * nh(dh, s.vec, sharp(hi, t.cov))};
}

double gen_nabla_pairing(const GenConnection& D, Pairing p, const JetSection& s, const JetSection& t,
                         const JetSection& u) {
  const Jet direct = derivative_along(s.vec, pairing(p, D.metric(), t, u));
  return direct.value() - pairing(p, D.metric(), values(D.apply(s.vec, t)), values(u)) -
         pairing(p, D.metric(), values(t), values(D.apply(s.vec, u)));
}

double gen_d_nabla_pairing(const GenConnection& D, Pairing p, const JetSection& s, const JetSection& t,
                           const JetSection& u) {
  return gen_nabla_pairing(D, p, s, t, u) - gen_nabla_pairing(D, p, t, s, u) +
         pairing(p, D.metric(), gen_torsion(D, s, t), values(u));
}

Section gen_curvature(const GenConnection& D, const JetVector& X, const JetVector& Y, const JetSection& u) {
  const JetSection xy = D.apply(X, D.apply(Y, u));
  const JetSection yx = D.apply(Y, D.apply(X, u));
  const JetSection br = D.apply(lie_bracket(X, Y), u);
  return values(xy) - values(yx) - values(br);
}

GenCurvatureTensor::GenCurvatureTensor(const GenConnection& D) : n_(D.dim()) {
  const int n = n_;
  // Coordinate fields commute and basis sections are constant, so
  // R(d_i, d_j) e_a = D_i (D_j e_a) - D_j (D_i e_a); the inner layer is shared.
  std::vector<JetVector> dirs;
  for (int i = 0; i < n; ++i) dirs.push_back(constant_jets(unit(i, n), n));
  std::vector<std::vector<JetSection>> inner(n);
  for (int j = 0; j < n; ++j)
    for (int a = 0; a < 2 * n; ++a) inner[j].push_back(D.apply(dirs[j], constant_section(basis_section(a, n), n)));
  m_.reserve(n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Matrix<double> m(2 * n, 2 * n);
      if (i != j) {
        for (int a = 0; a < 2 * n; ++a) {
          const Vec<double> col =
              stack(values(D.apply(dirs[i], inner[j][a])) - values(D.apply(dirs[j], inner[i][a])));
          for (int r = 0; r < 2 * n; ++r) m(r, a) = col[r];
        }
      }
      m_.push_back(std::move(m));
    }
  }
}

Section GenCurvatureTensor::apply(const Vec<double>& X, const Vec<double>& Y, const Section& u) const {
  const int n = n_;
  const Vec<double> uv = stack(u);
  Vec<double> r(2 * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double w = X[i] * Y[j];
      if (w == 0.0) continue;
      r = r + w * (m_[i * n + j] * uv);
    }
  }
  return unstack(r, n);
}

Section curvature_hat_closed(const Curvature& R, const MetricAt& h, const Vec<double>& X, const Vec<double>& Y,
                             const Section& u) {
  const Matrix<double> hv = values(h.h), hi = values(h.h_inv);
  return {R.apply(X, Y, u.vec), flat(hv, R.apply(X, Y, sharp(hi, u.cov)))};
}

Section curvature_dual_closed(const Curvature& R, const MetricAt& h, const Vec<double>& X, const Vec<double>& Y,
                              const Section& u) {
  const Matrix<double> hv = values(h.h), hi = values(h.h_inv);
  return {sharp(hi, R.apply_covector(X, Y, flat(hv, u.vec))), R.apply_covector(X, Y, u.cov)};
}

Section curvature_alpha_combination(const Christoffel& nabla, const MetricAt& h, double alpha,
                                    const Vec<double>& X, const Vec<double>& Y, const Section& u) {
  const Curvature R = curvature(nabla);
  const int n = h.dim();
  const Section s{X, Vec<double>(n, 0.0)}, t{Y, Vec<double>(n, 0.0)};
  const Section quad = T_hat(nabla, h, t, T_hat(nabla, h, s, u)) - T_hat(nabla, h, s, T_hat(nabla, h, t, u));
  return 0.5 * (1.0 + alpha) * curvature_hat_closed(R, h, X, Y, u) +
         0.5 * (1.0 - alpha) * curvature_dual_closed(R, h, X, Y, u) + (1.0 - alpha * alpha) * quad;
}

Section curvature_alpha_expanded(const Christoffel& nabla, const MetricAt& h, double alpha, const JetVector& X,
                                 const JetVector& Y, const JetSection& u) {
  const Curvature R = curvature(nabla);
  const Section base = 0.5 * (1.0 + alpha) * curvature_hat_closed(R, h, values(X), values(Y), values(u)) +
                       0.5 * (1.0 - alpha) * curvature_dual_closed(R, h, values(X), values(Y), values(u));
  auto cv = [&](const JetVector& A, const JetVector& B) { return covariant_vector(nabla, A, B); };
  auto cc = [&](const JetVector& A, const JetVector& B) { return covariant_covector(nabla, A, B); };
  auto fl = [&](const JetVector& A) { return flat(h.h, A); };
  auto sh = [&](const JetVector& A) { return sharp(h.h_inv, A); };
  const JetVector& Z = u.vec;
  const JetVector& g = u.cov;
  const JetVector vec = sh(cc(Y, cc(X, fl(Z)))) - sh(cc(Y, fl(cv(X, Z)))) - cv(Y, sh(cc(X, fl(Z)))) +
                        cv(Y, cv(X, Z)) - sh(cc(X, cc(Y, fl(Z)))) + sh(cc(X, fl(cv(Y, Z)))) +
                        cv(X, sh(cc(Y, fl(Z)))) - cv(X, cv(Y, Z));
  const JetVector cov = cc(Y, cc(X, g)) - cc(Y, fl(cv(X, sh(g)))) - fl(cv(Y, sh(cc(X, g)))) +
                        fl(cv(Y, cv(X, sh(g)))) - cc(X, cc(Y, g)) + cc(X, fl(cv(Y, sh(g)))) +
                        fl(cv(X, sh(cc(Y, g)))) - fl(cv(X, cv(Y, sh(g))));
  const double c = 0.25 * (1.0 - alpha * alpha);
  return base + c * Section{values(vec), values(cov)};
}

Section curvature_alpha_nabla_h_form(const Christoffel& nabla, const MetricAt& h, double alpha,
                                     const JetVector& X, const JetVector& Y, const JetSection& u) {
  const Curvature R = curvature(nabla);
  const Vec<double> Xv = values(X), Yv = values(Y);
  const Section uv = values(u);
  const Section base = 0.5 * (1.0 + alpha) * curvature_hat_closed(R, h, Xv, Yv, uv) +
                       0.5 * (1.0 - alpha) * curvature_dual_closed(R, h, Xv, Yv, uv);
  const Matrix<double> hv = values(h.h), hi = values(h.h_inv);
  auto cv = [&](const JetVector& A, const JetVector& B) { return covariant_vector(nabla, A, B); };
  auto nhj = [&](const JetVector& A, const JetVector& B) { return nabla_h_apply(nabla, h, A, B); };
  auto sh = [&](const JetVector& A) { return sharp(h.h_inv, A); };
  const JetVector& Z = u.vec;
  const JetVector vec_jets = sh(nhj(lie_bracket(Y, X), Z)) - sh(nhj(Y, cv(X, Z))) + sh(nhj(X, cv(Y, Z))) -
                             cv(Y, sh(nhj(X, Z))) + cv(X, sh(nhj(Y, Z)));
  const Vec<double> vec =
      values(vec_jets) + sharp(hi, h_of_R_slot(R, hv, Xv, Yv, uv.vec)) + R.apply(Xv, Yv, uv.vec);
  const Tensor3d dh = nabla_h(nabla, h);
  const Vec<double> cov = nh(dh, Yv, sharp(hi, nh(dh, Xv, sharp(hi, uv.cov)))) -
                          nh(dh, Xv, sharp(hi, nh(dh, Yv, sharp(hi, uv.cov))));
  const double c = 0.25 * (1.0 - alpha * alpha);
  return base + c * Section{vec, cov};
}

Section curvature_alpha_parallel(const Curvature& R, const MetricAt& h, double alpha, const Vec<double>& X,
                                 const Vec<double>& Y, const Section& u) {
  const Matrix<double> hv = values(h.h), hi = values(h.h_inv);
  const Section base =
      0.5 * (1.0 + alpha) * curvature_hat_closed(R, h, X, Y, u) + 0.5 * (1.0 - alpha) * curvature_dual_closed(R, h, X, Y, u);
  const Vec<double> brace = sharp(hi, h_of_R_slot(R, hv, X, Y, u.vec)) + R.apply(X, Y, u.vec);
  const int n = h.dim();
  return base + 0.25 * (1.0 - alpha * alpha) * Section{brace, Vec<double>(n, 0.0)};
}

Section curvature_base_lift(const Curvature& R, const Vec<double>& X, const Vec<double>& Y, const Section& u) {
  return {R.apply(X, Y, u.vec), R.apply_covector(X, Y, u.cov)};
}

JetMatrix frame_jets(const MetricAt& h, const Matrix<double>& start) {
  return orthonormal_frame(h.h, start, h.x);
}

Matrix<double> gen_ricci_frame_sum(const GenCurvatureTensor& R, const MetricAt& h, const Matrix<double>& E) {
  const int n = h.dim();
  const Matrix<double> hv = values(h.h);
  Matrix<double> ric(2 * n, 2 * n);
  for (int a = 0; a < n; ++a) {
    Vec<double> Ea(n);
    for (int i = 0; i < n; ++i) Ea[i] = E(a, i);
    const Vec<double> hEa = flat(hv, Ea);
    for (double sign : {1.0, -1.0}) {
      // E_a + sign h(E_a), unnormalized; the overall 1/2 absorbs the 1/sqrt2 pair.
      const Section sigma{Ea, sign * hEa};
      for (int t = 0; t < 2 * n; ++t) {
        const Vec<double> tv = basis_section(t, n).vec;
        for (int v = 0; v < 2 * n; ++v) {
          ric(t, v) += 0.5 * pairing(Pairing::check, h, R.apply(sigma.vec, tv, basis_section(v, n)), sigma);
        }
      }
    }
  }
  return ric;
}

Matrix<double> gen_ricci_reduced(const GenCurvatureTensor& R, const MetricAt& h, const Matrix<double>& E) {
  const int n = h.dim();
  Matrix<double> ric(2 * n, 2 * n);
  for (int a = 0; a < n; ++a) {
    Vec<double> Ea(n);
    for (int i = 0; i < n; ++i) Ea[i] = E(a, i);
    const Section ea{Ea, Vec<double>(n, 0.0)};
    for (int t = 0; t < 2 * n; ++t) {
      const Vec<double> tv = basis_section(t, n).vec;
      for (int v = 0; v < 2 * n; ++v) {
        ric(t, v) += pairing(Pairing::check, h, R.apply(Ea, tv, basis_section(v, n)), ea);
      }
    }
  }
  return ric;
}

namespace {

struct RicciPieces {
  Matrix<double> ric;     // sum h(R(E_i,Y)Z, E_i)
  Matrix<double> dual;    // sum (R(E_i,Y) h(Z))(E_i)
};

RicciPieces ricci_pieces(const Curvature& R, const MetricAt& h, const JetMatrix& E) {
  const int n = h.dim();
  const Matrix<double> hv = values(h.h), Ev = values(E);
  RicciPieces p{Matrix<double>(n, n), Matrix<double>(n, n)};
  for (int i = 0; i < n; ++i) {
    Vec<double> Ei(n);
    for (int m = 0; m < n; ++m) Ei[m] = Ev(i, m);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        p.ric(j, k) += bilinear(hv, R.apply(Ei, unit(j, n), unit(k, n)), Ei);
        p.dual(j, k) += dot(R.apply_covector(Ei, unit(j, n), flat(hv, unit(k, n))), Ei);
      }
    }
  }
  return p;
}

}  // namespace

Matrix<double> gen_ricci_closed(const Christoffel& nabla, const MetricAt& h, double alpha, const JetMatrix& E) {
  if (h.kind != SymmetryKind::symmetric) throw UsageError("Ricci closed form needs a symmetric metric");
  const int n = h.dim();
  const RicciPieces p = ricci_pieces(curvature(nabla), h, E);
  auto cv = [&](const JetVector& A, const JetVector& B) { return covariant_vector(nabla, A, B); };
  auto cc = [&](const JetVector& A, const JetVector& B) { return covariant_covector(nabla, A, B); };
  auto fl = [&](const JetVector& A) { return flat(h.h, A); };
  auto sh = [&](const JetVector& A) { return sharp(h.h_inv, A); };
  auto hh = [&](const JetVector& A, const JetVector& B) { return bilinear(h.h, A, B); };
  const double a = 0.5 * (1.0 + alpha), b = 0.5 * (1.0 - alpha), c = 0.25 * (1.0 - alpha * alpha);
  Matrix<double> out(n, n);
  for (int j = 0; j < n; ++j) {
    const JetVector Y = constant_jets(unit(j, n), n);
    for (int k = 0; k < n; ++k) {
      const JetVector Z = constant_jets(unit(k, n), n);
      Jet brace(0.0);
      for (int i = 0; i < n; ++i) {
        const JetVector Ei = row(E, i);
        const JetVector YE = lie_bracket(Y, Ei);
        brace += dot(cc(YE, fl(Z)), Ei) - dot(cc(Y, fl(cv(Ei, Z))), Ei) + dot(cc(Ei, fl(cv(Y, Z))), Ei) +
                 hh(cv(YE, Z), Ei) - hh(cv(Y, sh(cc(Ei, fl(Z)))), Ei) + hh(cv(Ei, sh(cc(Y, fl(Z)))), Ei);
      }
      out(j, k) = a * a * p.ric(j, k) + b * b * p.dual(j, k) + c * brace.value();
    }
  }
  return out;
}

Matrix<double> gen_ricci_nabla_h_form(const Christoffel& nabla, const MetricAt& h, double alpha,
                                      const JetMatrix& E) {
  if (h.kind != SymmetryKind::symmetric) throw UsageError("Ricci closed form needs a symmetric metric");
  const int n = h.dim();
  const RicciPieces p = ricci_pieces(curvature(nabla), h, E);
  auto cv = [&](const JetVector& A, const JetVector& B) { return covariant_vector(nabla, A, B); };
  auto nhj = [&](const JetVector& A, const JetVector& B) { return nabla_h_apply(nabla, h, A, B); };
  auto sh = [&](const JetVector& A) { return sharp(h.h_inv, A); };
  auto hh = [&](const JetVector& A, const JetVector& B) { return bilinear(h.h, A, B); };
  const double a = 0.5 * (1.0 + alpha), b = 0.5 * (1.0 - alpha), c = 0.25 * (1.0 - alpha * alpha);
  Matrix<double> out(n, n);
  for (int j = 0; j < n; ++j) {
    const JetVector Y = constant_jets(unit(j, n), n);
    for (int k = 0; k < n; ++k) {
      const JetVector Z = constant_jets(unit(k, n), n);
      Jet brace(0.0);
      for (int i = 0; i < n; ++i) {
        const JetVector Ei = row(E, i);
        brace += dot(nhj(lie_bracket(Y, Ei), Z), Ei) - dot(nhj(Y, cv(Ei, Z)), Ei) + dot(nhj(Ei, cv(Y, Z)), Ei) -
                 hh(cv(Y, sh(nhj(Ei, Z))), Ei) + hh(cv(Ei, sh(nhj(Y, Z))), Ei);
      }
      out(j, k) = a * p.ric(j, k) + b * p.dual(j, k) + c * brace.value();
    }
  }
  return out;
}

double gen_scalar(const Matrix<double>& ricci, const MetricAt& h) {
  const int n = h.dim();
  Matrix<double> hc(2 * n, 2 * n);
  for (int a = 0; a < 2 * n; ++a)
    for (int b = 0; b < 2 * n; ++b)
      hc(a, b) = pairing(Pairing::check, h, basis_section(a, n), basis_section(b, n));
  const Matrix<double> inv = invert(hc, h.x).inv;
  double s = 0.0;
  for (int a = 0; a < 2 * n; ++a)
    for (int b = 0; b < 2 * n; ++b) s += inv(a, b) * ricci(a, b);
  return s;
}

Matrix<double> equiaffine_obstruction(const Curvature& R, const MetricAt& h, const Matrix<double>& E) {
  const int n = h.dim();
  const Matrix<double> hv = values(h.h);
  Matrix<double> out(n, n);
  for (int a = 0; a < n; ++a) {
    Vec<double> Ea(n);
    for (int i = 0; i < n; ++i) Ea[i] = E(a, i);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        out(j, k) += bilinear(hv, R.apply(unit(j, n), Ea, Ea), unit(k, n)) -
                     bilinear(hv, R.apply(unit(k, n), Ea, Ea), unit(j, n));
      }
    }
  }
  return out;
}

}  // namespace genverify
