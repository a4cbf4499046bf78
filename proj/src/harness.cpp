#include "genverify/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>

#include "genverify/errors.hpp"
#include "genverify/gen_bundle.hpp"
#include "genverify/gen_structures.hpp"

namespace genverify {

namespace {

// Threshold for "visibly nonzero" in existence checks.
constexpr double kWitness = 1e-4;

Vec<double> unit(int i, int n) {
  Vec<double> e(n, 0.0);
  e[i] = 1.0;
  return e;
}

std::vector<double> flat_values(const Section& s) {
  std::vector<double> v(s.vec.begin(), s.vec.end());
  v.insert(v.end(), s.cov.begin(), s.cov.end());
  return v;
}
std::vector<double> flat_values(const Vec<double>& v) { return {v.begin(), v.end()}; }
std::vector<double> flat_values(const Matrix<double>& m) {
  std::vector<double> v;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
  return v;
}
std::vector<double> flat_values(const Tensor3d& t) { return t.data(); }
std::vector<double> flat_values(const Christoffel& c) {
  std::vector<double> v;
  const int n = c.dim();
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) v.push_back(c.value(k, i, j));
  return v;
}
std::vector<double> flat_values(const GenConnectionAt& g) {
  std::vector<double> v;
  for (const Matrix<double>& b : g.blocks) {
    const std::vector<double> f = flat_values(b);
    v.insert(v.end(), f.begin(), f.end());
  }
  return v;
}
std::vector<double> flat_values(double d) { return {d}; }

double max_abs_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Accumulates |a - b| against the scaled tolerance.
class Residual {
 public:
  explicit Residual(CheckRecord& r) : r_(r) {}

  template <class A, class B>
  void compare(const A& a, const B& b, const Point& x) {
    const std::vector<double> va = flat_values(a), vb = flat_values(b);
    if (va.size() != vb.size()) throw UsageError("compared quantities differ in size");
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) {
      const double d = std::abs(va[i] - vb[i]);
      err = std::isnan(d) ? INFINITY : std::max(err, d);
      scale = std::max({scale, std::abs(va[i]), std::abs(vb[i])});
    }
    add(err, scale, x);
  }

  void add(double err, double scale, const Point& x) {
    const double scaled = err / (1.0 + scale);
    r_.max_abs_error = std::max(r_.max_abs_error, err);
    if (scaled > r_.max_scaled_error) {
      r_.max_scaled_error = scaled;
      r_.worst_point = x;
    }
  }

  void finish() {
    r_.status = r_.max_scaled_error <= r_.tol ? CheckStatus::pass : CheckStatus::fail;
    if (r_.status == CheckStatus::fail && r_.reason.empty()) {
      r_.reason = "scaled error " + fmt(r_.max_scaled_error) + " exceeds tol " + fmt(r_.tol);
    }
  }

 private:
  CheckRecord& r_;
};

// Tracks the max of a quantity and where it peaks.
struct Peak {
  double value = 0.0;
  std::optional<Point> at;
  void add(double v, const Point& x) {
    if (std::isnan(v)) v = INFINITY;
    if (v > value) {
      value = v;
      at = x;
    }
  }
};

// Both quantities must vanish together within tol.
void covanish(CheckRecord& r, const std::string& name_a, const Peak& a, const std::string& name_b, const Peak& b) {
  r.measured["max_" + name_a] = a.value;
  r.measured["max_" + name_b] = b.value;
  const bool za = a.value <= r.tol, zb = b.value <= r.tol;
  r.max_abs_error = 0.0;
  r.max_scaled_error = 0.0;
  if (!za) r.witness = a.at;
  if (za == zb) {
    r.status = CheckStatus::pass;
    r.reason = za ? "both vanish" : "neither vanishes";
  } else {
    r.status = CheckStatus::fail;
    r.reason = za ? name_a + " vanishes but " + name_b + " does not" : name_b + " vanishes but " + name_a + " does not";
    r.worst_point = za ? b.at : a.at;
  }
}

Jet coordinate(const Point& x, int i) { return seed(i, x[i], static_cast<int>(x.size())); }

// A non-constant vector field with nonzero first and second derivatives.
JetVector poly_vector(const Point& x, int shift) {
  const int n = static_cast<int>(x.size());
  JetVector V(n);
  for (int k = 0; k < n; ++k) {
    const Jet a = coordinate(x, (k + shift) % n), b = coordinate(x, (k + shift + 1) % n);
    V[k] = Jet(1.0 + 0.5 * k) + a * b - 0.3 * a * a;
  }
  return V;
}

JetSection poly_section(const Point& x) {
  const int n = static_cast<int>(x.size());
  JetSection s{poly_vector(x, 1), JetVector(n)};
  for (int k = 0; k < n; ++k) {
    const Jet a = coordinate(x, k), b = coordinate(x, (k + 1) % n);
    s.cov[k] = sin(a) + 0.5 * b * b - Jet(0.2 * k);
  }
  return s;
}

std::vector<Section> basis_sections(int n) {
  std::vector<Section> out;
  for (int a = 0; a < 2 * n; ++a) out.push_back(basis_section(a, n));
  return out;
}

std::vector<JetSection> constant_sections(int n) {
  std::vector<JetSection> out;
  for (int a = 0; a < 2 * n; ++a) out.push_back(constant_section(basis_section(a, n), n));
  return out;
}

// Constant sections, the h-images 0 + h(d_i), and one polynomial section.
std::vector<JetSection> field_sections(const PointData& d) {
  std::vector<JetSection> out = nijenhuis_test_sections(d.h);
  out.push_back(poly_section(d.x));
  return out;
}

JetVector direction(int i, int n) { return constant_vector(unit(i, n), n); }

Christoffel dual_of(const PointData& d) { return dual_connection(d.nabla, d.h); }

double dot_tensor(const Tensor3d& t, const Vec<double>& X, const Vec<double>& Y, const Vec<double>& Z) {
  const int n = t.dim();
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) s += X[i] * Y[j] * Z[k] * t(i, j, k);
  return s;
}

// h(T(d_i, d_j), d_k).
Tensor3d lowered_torsion(const Christoffel& nabla, const MetricAt& h) {
  const int n = h.dim();
  const Tensor3d T = torsion(nabla);
  Tensor3d out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) out(i, j, k) += T(m, i, j) * h.value(m, k);
  return out;
}

// (J (nabla_i J) - (nabla_i J) J) d_j, component k.
Tensor3d J_nablaJ_commutator(const Christoffel& nabla, const JetMatrix& J) {
  const int n = J.rows();
  const Tensor3d dJ = nabla_J(nabla, J);
  const Matrix<double> Jv = values(J);
  Tensor3d c(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int m = 0; m < n; ++m) c(i, k, j) += Jv(k, m) * dJ(i, m, j) - dJ(i, k, m) * Jv(m, j);
  return c;
}

Matrix<double> antisymmetric_part(const Matrix<double>& m) { return 0.5 * (m - transpose(m)); }

Matrix<double> vector_block(const Matrix<double>& m, int n) {
  Matrix<double> b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = m(i, j);
  return b;
}

Matrix<double> embed_vector_block(const Matrix<double>& m) {
  const int n = m.rows();
  Matrix<double> b(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = m(i, j);
  return b;
}

Matrix<double> reduced_ricci(const CheckContext& c, const PointData& d, double alpha, const Matrix<double>& E) {
  return gen_ricci_reduced(c.curvatures.at(d, alpha), d.h, E);
}

Matrix<double> default_frame(const PointData& d) { return orthonormal_frame(values(d.h.h), d.x); }

// max over X = d_i and basis t of |(D_X J^)(t)|.
double covdiff_norm(const GenConnection& D, const GenOperator& Jh, int n) {
  double m = 0.0;
  for (int i = 0; i < n; ++i)
    for (const JetSection& t : constant_sections(n)) m = std::max(m, max_abs(gen_covdiff(D, Jh, direction(i, n), t)));
  return m;
}

const char* kStructureKinds[] = {"product", "complex", "metallic"};

std::vector<StructureKind> all_kinds() {
  return {StructureKind::product, StructureKind::complex, StructureKind::metallic};
}

// ---- hypotheses ----

using Hyp = std::function<std::string(const Scenario&, const Profile&)>;

std::string all_of(std::initializer_list<std::string> reasons) {
  for (const std::string& r : reasons) {
    if (!r.empty()) return r;
  }
  return {};
}

std::string need_sym_or_skew(const Scenario& s, const Profile&) {
  return s.h_kind == SymmetryKind::general ? "h is neither symmetric nor skew" : "";
}
std::string need_symmetric(const Scenario& s, const Profile&) {
  return s.h_kind == SymmetryKind::symmetric ? "" : "h is not symmetric";
}
std::string need_quasi_statistical(const Scenario&, const Profile& p) {
  return p.quasi_statistical() ? "" : "d^nabla h != 0 (not quasi-statistical)";
}
std::string need_statistical(const Scenario&, const Profile& p) {
  return p.statistical() ? "" : "(h, nabla) is not statistical (T != 0 or d^nabla h != 0)";
}
std::string need_parallel_h(const Scenario&, const Profile& p) { return p.parallel_h() ? "" : "nabla h != 0"; }
std::string need_positive_definite(const Scenario& s, const Profile& p) {
  if (s.h_kind != SymmetryKind::symmetric) return "scenario incompatible with Ricci checks: h is not symmetric";
  return p.positive_definite ? "" : "scenario incompatible with Ricci checks: h is not positive definite";
}
std::string need_J(const Scenario&, const Profile& p) { return p.has_J ? "" : "scenario has no J"; }
std::string need_J_h_symmetric(const Scenario& s, const Profile& p) {
  return all_of({need_symmetric(s, p), need_J(s, p), p.J_h_symmetric() ? "" : "J is not h-symmetric"});
}
std::string need_structure(const Scenario& s, const Profile& p) { return need_J_h_symmetric(s, p); }
std::string need_twin(const Scenario& s, const Profile& p) {
  return all_of({s.connection == ConnectionRecipe::levi_civita ? "" : "connection is not the Levi-Civita connection of g",
                 need_J_h_symmetric(s, p), p.J_invertible() ? "" : "J is not invertible"});
}
std::string need_twin_statistical(const Scenario& s, const Profile& p) {
  return all_of({need_twin(s, p), p.dJ_zero() ? "" : "d^nabla J != 0, so (g~, nabla) is not statistical"});
}

Hyp both(Hyp a, Hyp b) {
  return [a, b](const Scenario& s, const Profile& p) { return all_of({a(s, p), b(s, p)}); };
}

// ---- registry ----

std::vector<CheckDef> build_registry() {
  std::vector<CheckDef> R;
  auto add = [&](std::string id, std::string anchor, bool uses_alphas, Hyp hyp,
                 std::function<void(const CheckContext&, CheckRecord&)> body, std::optional<double> fixed = {}) {
    R.push_back(CheckDef{std::move(id), std::move(anchor), uses_alphas, fixed, std::move(hyp), std::move(body)});
  };
  auto always = [](const Scenario&, const Profile&) { return std::string(); };

  // ---------- differentiation substrate ----------

  add("jets_match_finite_differences",
      "first and second partials of every h, Gamma and J component equal central differences (1e-5 / 1e-3)", false,
      always,
      [](const CheckContext& c, CheckRecord& r) {
        std::vector<const Expr*> exprs;
        for (const Expr& e : c.scenario.h.components) exprs.push_back(&e);
        if (c.scenario.gamma)
          for (const Expr& e : c.scenario.gamma->components) exprs.push_back(&e);
        if (c.scenario.J)
          for (const Expr& e : c.scenario.J->components) exprs.push_back(&e);
        double grad = 0.0, hess = 0.0;
        Peak worst;
        for (const PointData& d : c.points) {
          for (const Expr* e : exprs) {
            const Jet j = e->eval_jet(d.x);
            const FdDerivatives fd = fd_oracle([e](std::span<const double> y) { return e->eval(y); }, d.x, 1e-4);
            const int n = static_cast<int>(d.x.size());
            for (int a = 0; a < n; ++a) {
              const double g = std::abs(j.grad(a) - fd.grad[a]) / (1.0 + std::max(std::abs(j.grad(a)), std::abs(fd.grad[a])));
              grad = std::max(grad, g);
              worst.add(g / 1e-5, d.x);
              for (int b = 0; b < n; ++b) {
                const double h = std::abs(j.hess(a, b) - fd.hess[a][b]) /
                                 (1.0 + std::max(std::abs(j.hess(a, b)), std::abs(fd.hess[a][b])));
                hess = std::max(hess, h);
                worst.add(h / 1e-3, d.x);
              }
            }
          }
        }
        r.measured["max_scaled_gradient_error"] = grad;
        r.measured["max_scaled_hessian_error"] = hess;
        r.max_abs_error = grad;
        r.max_scaled_error = std::max(grad / 1e-5, hess / 1e-3) * r.tol;
        r.worst_point = worst.at;
        r.status = grad <= 1e-5 && hess <= 1e-3 ? CheckStatus::pass : CheckStatus::fail;
        if (r.status == CheckStatus::fail) r.reason = "jet derivatives disagree with finite differences";
      },
      1.0);

  // ---------- base manifold ----------

  add("musical_maps_invert", "sharp(flat X) = X and flat(sharp eta) = eta", false, always,
      [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const Matrix<double> hv = values(d.h.h), hi = values(d.h.h_inv);
          const int n = d.h.dim();
          for (int i = 0; i < n; ++i) {
            res.compare(sharp(hi, flat(hv, unit(i, n))), unit(i, n), d.x);
            res.compare(flat(hv, sharp(hi, unit(i, n))), unit(i, n), d.x);
          }
        }
        res.finish();
      });

  add("levi_civita_is_metric_and_torsion_free", "the Levi-Civita connection of g has nabla g = 0 and T = 0", false,
      [](const Scenario& s, const Profile&) {
        return s.connection == ConnectionRecipe::levi_civita ? "" : "connection is not Levi-Civita";
      },
      [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const int n = d.h.dim();
          res.compare(nabla_h(d.nabla, d.h), Tensor3d(n), d.x);
          res.compare(torsion(d.nabla), Tensor3d(n), d.x);
        }
        res.finish();
      });

  add("dual_connection_duality", "X h(Y,Z) = h(nabla_X Y, Z) + h(Y, nabla*_X Z)", false, need_sym_or_skew,
      [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const Christoffel ds = dual_of(d);
          const int n = d.h.dim();
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              for (int k = 0; k < n; ++k) {
                double rhs = 0.0;
                for (int m = 0; m < n; ++m) rhs += d.nabla.value(m, i, j) * d.h.value(m, k) + ds.value(m, i, k) * d.h.value(j, m);
                res.compare(d.h.dh(i, j, k), rhs, d.x);
              }
        }
        res.finish();
      });

  add("dual_connection_torsion_free", "d^nabla h = 0 implies T^{nabla*} = 0", false,
      both(need_sym_or_skew, need_quasi_statistical), [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) res.compare(torsion(dual_of(d)), Tensor3d(d.h.dim()), d.x);
        res.finish();
      });

  add("dual_connection_nabla_h_negates", "d^nabla h = 0 implies nabla* h = -nabla h", false,
      both(need_sym_or_skew, need_quasi_statistical), [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const Tensor3d a = nabla_h(dual_of(d), d.h), b = nabla_h(d.nabla, d.h);
          Tensor3d nb(d.h.dim());
          const int n = d.h.dim();
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              for (int k = 0; k < n; ++k) nb(i, j, k) = -b(i, j, k);
          res.compare(a, nb, d.x);
        }
        res.finish();
      });

  add("dual_connection_covector_rule", "nabla*_X beta = nabla_X beta - (nabla_X h)(h^-1 beta)", false,
      need_sym_or_skew, [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const Christoffel ds = dual_of(d);
          const int n = d.h.dim();
          for (int i = 0; i < n; ++i)
            for (int m = 0; m < n; ++m) {
              const JetVector X = direction(i, n), beta = direction(m, n);
              const JetVector lhs = covariant_covector(ds, X, beta);
              const JetVector rhs = covariant_covector(d.nabla, X, beta) - nabla_h_apply(d.nabla, d.h, X, sharp(d.h.h_inv, beta));
              res.compare(values(lhs), values(rhs), d.x);
            }
        }
        res.finish();
      });

  add("alpha_connection_endpoints", "nabla^(1) = nabla and nabla^(-1) = nabla*", false, need_sym_or_skew,
      [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const Christoffel ds = dual_of(d);
          res.compare(alpha_connection(d.nabla, ds, 1.0), d.nabla, d.x);
          res.compare(alpha_connection(d.nabla, ds, -1.0), ds, d.x);
        }
        res.finish();
      });

  add("alpha_connection_torsion_scaling", "d^nabla h = 0 implies T^{nabla^(a)} = (1+a)/2 T^nabla", true,
      both(need_sym_or_skew, need_quasi_statistical), [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const Christoffel ds = dual_of(d);
          const Tensor3d T = torsion(d.nabla);
          for (double a : c.alphas) {
            Tensor3d s(T.dim());
            const int n = T.dim();
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) s(i, j, k) = 0.5 * (1.0 + a) * T(i, j, k);
            res.compare(torsion(alpha_connection(d.nabla, ds, a)), s, d.x);
          }
        }
        res.finish();
      });

  add("alpha_connection_nabla_h_scaling", "d^nabla h = 0 implies nabla^(a) h = a nabla h", true,
      both(need_sym_or_skew, need_quasi_statistical), [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const Christoffel ds = dual_of(d);
          const Tensor3d nh = nabla_h(d.nabla, d.h);
          const int n = nh.dim();
          for (double a : c.alphas) {
            Tensor3d s(n);
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) s(i, j, k) = a * nh(i, j, k);
            res.compare(nabla_h(alpha_connection(d.nabla, ds, a), d.h), s, d.x);
          }
        }
        res.finish();
      });

  add("alpha_connection_d_nabla_h", "d^nabla h = 0 implies d^{nabla^(a)} h = (1-a)/2 h(T^nabla(X,Y), Z)", true,
      both(need_sym_or_skew, need_quasi_statistical), [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const Christoffel ds = dual_of(d);
          const Tensor3d hT = lowered_torsion(d.nabla, d.h);
          const int n = hT.dim();
          for (double a : c.alphas) {
            Tensor3d s(n);
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) s(i, j, k) = 0.5 * (1.0 - a) * hT(i, j, k);
            res.compare(d_nabla_h(alpha_connection(d.nabla, ds, a), d.h), s, d.x);
          }
        }
        res.finish();
      });

  add("base_scalar_curvature_value", "scal^(h, nabla) equals the scenario's constant scalar curvature", false,
      [](const Scenario& s, const Profile& p) {
        return all_of({s.expected_scalar ? "" : "scenario declares no scalar curvature", need_positive_definite(s, p)});
      },
      [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          res.compare(scalar_base(ricci_base(d.nabla, d.h), d.h), *c.scenario.expected_scalar, d.x);
        }
        res.finish();
      });

  add("base_ricci_constant_curvature", "constant curvature: Ric^nabla = (scal / n) h", false,
      [](const Scenario& s, const Profile& p) {
        return all_of({s.expected_scalar ? "" : "scenario declares no scalar curvature", need_positive_definite(s, p),
                       s.connection == ConnectionRecipe::levi_civita || p.parallel_h() ? "" : "nabla is not metric"});
      },
      [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const int n = d.h.dim();
          res.compare(ricci_base(d.nabla, d.h), (*c.scenario.expected_scalar / n) * values(d.h.h), d.x);
        }
        res.finish();
      });

  // ---------- h-symmetric J on the base ----------

  add("nabla_h_J_identity", "(nabla_X h)(JY) - J*((nabla_X h)(Y)) = -F(X,Y,.) + F(X,.,Y)", false, need_J_h_symmetric,
      [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) res.add(nabla_h_J_residual(d.h, d.nabla, *d.J), 0.0, d.x);
        res.finish();
      });

  add("dual_nabla_J_formula", "(nabla*_X J)Y = (nabla_X J)Y + h^-1{F(X,.,Y) - F(X,Y,.)}", false,
      both(need_J_h_symmetric, need_statistical), [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          res.add(dual_nabla_J_residual(d.h, d.nabla, *d.J), max_abs_of(nabla_J(d.nabla, *d.J).data()), d.x);
        }
        res.finish();
      });

  add("dual_nabla_J_agrees_iff_h_symmetric", "nabla J = nabla* J iff F(X,Y,Z) = F(X,Z,Y)", false,
      both(need_J_h_symmetric, need_statistical), [](const CheckContext& c, CheckRecord& r) {
        Peak a, b;
        for (const PointData& d : c.points) {
          const Tensor3d dJ = nabla_J(d.nabla, *d.J), dJs = nabla_J(dual_of(d), *d.J);
          double m = 0.0;
          for (std::size_t i = 0; i < dJ.data().size(); ++i) m = std::max(m, std::abs(dJ.data()[i] - dJs.data()[i]));
          a.add(m, d.x);
          const Tensor3d F = F_tensor(d.h, d.nabla, *d.J);
          const int n = F.dim();
          double s = 0.0;
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              for (int k = 0; k < n; ++k) s = std::max(s, std::abs(F(i, j, k) - F(i, k, j)));
          b.add(s, d.x);
        }
        covanish(r, "nabla_J_minus_dual_nabla_J", a, "F_asymmetry", b);
      });

  add("parallel_J_stays_parallel_along_alpha", "nabla J = 0 implies nabla^(a) J = 0 for every a", true,
      [](const Scenario& s, const Profile& p) {
        return all_of({need_J_h_symmetric(s, p), need_statistical(s, p), p.parallel_J() ? "" : "nabla J != 0"});
      },
      [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const Christoffel ds = dual_of(d);
          for (double a : c.alphas) res.compare(nabla_J(alpha_connection(d.nabla, ds, a), *d.J), Tensor3d(d.h.dim()), d.x);
        }
        res.finish();
      },
      1e-10);

  add("metallic_obstruction_closed_form", "J^2 = pJ + qI implies (nabla_X J)JY - J((nabla_X J)Y) = (pI - 2J)(nabla_X J)Y",
      false,
      [](const Scenario& s, const Profile& p) {
        return all_of({need_J(s, p), p.metallic() ? "" : "J does not satisfy J^2 = pJ + qI"});
      },
      [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const MetallicObstruction m =
              metallic_obstruction(d.nabla, *d.J, c.scenario.metallic_p(), c.scenario.metallic_q(), 1e-8);
          res.compare(m.commutator, m.closed, d.x);
        }
        res.finish();
      });

  add("metallic_commuting_iff_parallel", "J^2 = pJ + qI, p^2 + 4q != 0: J((nabla_X J)Y) = (nabla_X J)JY iff nabla J = 0",
      false,
      [](const Scenario& s, const Profile& p) {
        const double pp = s.metallic_p(), qq = s.metallic_q();
        return all_of({need_twin(s, p), p.metallic() ? "" : "J does not satisfy J^2 = pJ + qI",
                       std::abs(pp * pp + 4 * qq) > 1e-12 ? "" : "p^2 + 4q = 0"});
      },
      [](const CheckContext& c, CheckRecord& r) {
        Peak a, b;
        for (const PointData& d : c.points) {
          a.add(max_abs_of(J_nablaJ_commutator(d.nabla, *d.J).data()), d.x);
          b.add(max_abs_of(nabla_J(d.nabla, *d.J).data()), d.x);
        }
        covanish(r, "commutator", a, "nabla_J", b);
      });

  // ---------- twin metric ----------

  add("twin_nabla_J_symmetric", "g((nabla_X J)Y, Z) = g((nabla_X J)Z, Y)", false, need_twin,
      [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const Tensor3d F = F_tensor(d.h, d.nabla, *d.J);
          const int n = F.dim();
          Tensor3d Ft(n);
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              for (int k = 0; k < n; ++k) Ft(i, j, k) = F(i, k, j);
          res.compare(F, Ft, d.x);
        }
        res.finish();
      });

  add("twin_metric_derivative", "(nabla_X g~)(Y, Z) = g((nabla_X J)Z, Y)", false, need_twin,
      [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const MetricAt gt = twin_metric(d.h, *d.J);
          const Tensor3d F = F_tensor(d.h, d.nabla, *d.J);
          const int n = F.dim();
          Tensor3d rhs(n);
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              for (int k = 0; k < n; ++k) rhs(i, j, k) = F(i, k, j);
          res.compare(nabla_h(d.nabla, gt), rhs, d.x);
        }
        res.finish();
      });

  add("twin_statistical_iff_dJ_zero", "(g~, nabla) is statistical iff (nabla_X J)Y = (nabla_Y J)X", false, need_twin,
      [](const CheckContext& c, CheckRecord& r) {
        Peak a, b;
        for (const PointData& d : c.points) {
          const MetricAt gt = twin_metric(d.h, *d.J);
          a.add(std::max(max_abs_of(d_nabla_h(d.nabla, gt).data()), max_abs_of(torsion(d.nabla).data())), d.x);
          b.add(max_abs_of(F_conditions(d.h, d.nabla, *d.J).dJ.data()), d.x);
        }
        covanish(r, "twin_statistical_defect", a, "d_nabla_J", b);
      });

  add("twin_dual_matches_dual_connection", "nabla + J^-1(nabla J) is the dual of nabla with respect to g~", false,
      need_twin, [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          res.compare(twin_dual(d.nabla, *d.J), dual_connection(d.nabla, twin_metric(d.h, *d.J)), d.x);
        }
        res.finish();
      });

  add("twin_dual_covector_rule", "nabla*_X eta = nabla_X eta - (J^-1(nabla_X J))* eta", false, need_twin,
      [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const int n = d.h.dim();
          const Christoffel ds = twin_dual(d.nabla, *d.J);
          const Tensor3d dJ = nabla_J(d.nabla, *d.J);
          const Matrix<double> Ji = invert(values(*d.J), d.x).inv;
          for (int i = 0; i < n; ++i) {
            Matrix<double> A(n, n);  // J^-1 (nabla_i J)
            for (int k = 0; k < n; ++k)
              for (int j = 0; j < n; ++j)
                for (int m = 0; m < n; ++m) A(k, j) += Ji(k, m) * dJ(i, m, j);
            for (int m = 0; m < n; ++m) {
              const JetVector X = direction(i, n), eta = direction(m, n);
              const Vec<double> lhs = values(covariant_covector(ds, X, eta));
              Vec<double> rhs = values(covariant_covector(d.nabla, X, eta));
              for (int j = 0; j < n; ++j) rhs[j] -= A(m, j);
              res.compare(lhs, rhs, d.x);
            }
          }
        }
        res.finish();
      });

  add("twin_alpha_closed_form", "nabla^(a) = nabla - (1-a)/2 J^-1(nabla J) for the twin dualistic structure", true,
      need_twin, [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points)
          for (double a : c.alphas) res.compare(twin_alpha(d.nabla, *d.J, a), twin_alpha_display(d.nabla, *d.J, a), d.x);
        res.finish();
      });

  add("twin_dual_of_statistical_pair", "(g~, nabla) statistical implies T^{nabla*} = 0 and nabla* g~ = -nabla g~", false,
      need_twin_statistical, [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const MetricAt gt = twin_metric(d.h, *d.J);
          const Christoffel ds = dual_connection(d.nabla, gt);
          const int n = d.h.dim();
          res.compare(torsion(ds), Tensor3d(n), d.x);
          Tensor3d neg(n);
          const Tensor3d nh = nabla_h(d.nabla, gt);
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              for (int k = 0; k < n; ++k) neg(i, j, k) = -nh(i, j, k);
          res.compare(nabla_h(ds, gt), neg, d.x);
        }
        res.finish();
      });

  add("twin_C2_iff_commuting", "F(Y,.,X) - F(X,.,Y) = 0 iff J((nabla_X J)Y) = (nabla_X J)JY, F taken with g~", false,
      need_twin_statistical, [](const CheckContext& c, CheckRecord& r) {
        Peak a, b;
        for (const PointData& d : c.points) {
          const MetricAt gt = twin_metric(d.h, *d.J);
          a.add(max_abs_of(F_conditions(gt, d.nabla, *d.J).C2.data()), d.x);
          b.add(max_abs_of(J_nablaJ_commutator(d.nabla, *d.J).data()), d.x);
        }
        covanish(r, "C2", a, "commutator", b);
      });

  for (StructureKind kind : {StructureKind::product, StructureKind::complex}) {
    const std::string k = to_string(kind);
    add("twin_" + k + "_nijenhuis_invariance_iff_C2",
        "for J^ built from (g~, J): N^{nabla^(a)} = N^nabla for every a iff F(Y,Z,X) - F(X,Z,Y) = 0", true,
        need_twin_statistical, [kind](const CheckContext& c, CheckRecord& r) {
          Peak gap, c2;
          for (const PointData& d : c.points) {
            const MetricAt gt = twin_metric(d.h, *d.J);
            const GenOperator Jh = build_structure(kind, gt, *d.J, 1.0, 1.0, 1e-8);
            for (double a : c.alphas) gap.add(nijenhuis_alpha_gap(Jh, d.nabla, gt, a).gap, d.x);
            c2.add(max_abs_of(F_conditions(gt, d.nabla, *d.J).C2.data()), d.x);
          }
          covanish(r, "nijenhuis_gap", gap, "C2", c2);
        });
  }

  // ---------- generalized tangent bundle ----------

  add("hat_equals_check_iff_parallel_h", "nabla^ = nabla-check iff nabla h = 0", false, always,
      [](const CheckContext& c, CheckRecord& r) {
        Peak a, b;
        for (const PointData& d : c.points) {
          const std::vector<double> hat = flat_values(GenConnection::lift(LiftKind::hat, d.nabla, d.h).coefficients());
          const std::vector<double> chk = flat_values(GenConnection::lift(LiftKind::check, d.nabla, d.h).coefficients());
          double m = 0.0;
          for (std::size_t i = 0; i < hat.size(); ++i) m = std::max(m, std::abs(hat[i] - chk[i]));
          a.add(m, d.x);
          b.add(max_abs_of(nabla_h(d.nabla, d.h).data()), d.x);
        }
        covanish(r, "hat_minus_check", a, "nabla_h", b);
      });

  add("generalized_duality", "X h-check(t, u) = h-check(nabla^_X t, u) + h-check(t, nabla^*_X u)", false,
      need_sym_or_skew, [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const int n = d.h.dim();
          const GenConnection hat = GenConnection::lift(LiftKind::hat, d.nabla, d.h);
          const GenConnection dual = GenConnection::lift(LiftKind::dual, d.nabla, d.h);
          const std::vector<JetSection> secs = constant_sections(n);
          for (int i = 0; i < n; ++i) {
            const JetVector X = direction(i, n);
            for (const JetSection& t : secs)
              for (const JetSection& u : secs) {
                const double lhs = derivative_along(X, pairing(Pairing::check, d.h, t, u)).value();
                const double rhs = pairing(Pairing::check, d.h, values(hat.apply(X, t)), values(u)) +
                                   pairing(Pairing::check, d.h, values(t), values(dual.apply(X, u)));
                res.compare(lhs, rhs, d.x);
              }
          }
        }
        res.finish();
      });

  add("generalized_dual_tangent_block", "the tangent block of nabla^* is the base dual connection nabla*", false,
      need_sym_or_skew, [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const int n = d.h.dim();
          const GenConnectionAt g = GenConnection::lift(LiftKind::dual, d.nabla, d.h).coefficients();
          const Christoffel ds = dual_of(d);
          for (int i = 0; i < n; ++i) {
            const Matrix<double> vv = g.vec_vec(i);
            Matrix<double> base(n, n);
            for (int k = 0; k < n; ++k)
              for (int j = 0; j < n; ++j) base(k, j) = ds.value(k, i, j);
            res.compare(vv, base, d.x);
          }
        }
        res.finish();
      });

  add("gen_alpha_family_endpoints", "nabla^(1) = nabla^ and nabla^(-1) = nabla^* on TM + T*M", false, always,
      [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          res.compare(GenConnection::alpha(d.nabla, d.h, 1.0).coefficients(),
                      GenConnection::lift(LiftKind::hat, d.nabla, d.h).coefficients(), d.x);
          res.compare(GenConnection::alpha(d.nabla, d.h, -1.0).coefficients(),
                      GenConnection::lift(LiftKind::dual, d.nabla, d.h).coefficients(), d.x);
        }
        res.finish();
      });

  add("gen_alpha_average_connection",
      "nabla^(0)_X t = nabla-check_X t / 2 + {h^-1((nabla_X h)(Y)) - (nabla_X h)(h^-1 beta)} / 2", false, always,
      [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const int n = d.h.dim();
          const GenConnection avg = GenConnection::alpha(d.nabla, d.h, 0.0);
          for (int i = 0; i < n; ++i)
            for (const JetSection& t : field_sections(d)) {
              const JetVector X = direction(i, n);
              res.compare(values(avg.apply(X, t)), average_connection_closed(d.nabla, d.h, X, t), d.x);
            }
        }
        res.finish();
      });

  add("lifted_alpha_coincidence", "the hat lift of nabla^(a) equals (1+a)/2 nabla^ + (1-a)/2 nabla^*", true,
      need_sym_or_skew, [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const Christoffel ds = dual_of(d);
          for (double a : c.alphas) {
            res.compare(GenConnection::lift(LiftKind::hat, alpha_connection(d.nabla, ds, a), d.h).coefficients(),
                        GenConnection::alpha(d.nabla, d.h, a).coefficients(), d.x);
          }
        }
        res.finish();
      });

  add("alpha_bracket_closed_form",
      "[s,t]_{nabla^(a)} = [s,t]_nabla - (1-a)/2 {(nabla_X h)(h^-1 beta) - (nabla_Y h)(h^-1 eta)}", true,
      need_sym_or_skew, [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const std::vector<JetSection> secs = field_sections(d);
          for (double a : c.alphas)
            for (const JetSection& s : secs)
              for (const JetSection& t : secs)
                res.compare(values(alpha_bracket(d.nabla, d.h, a, s, t)), alpha_bracket_closed(d.nabla, d.h, a, s, t), d.x);
        }
        res.finish();
      });

  add("gen_torsion_closed_form",
      "T^(a)(s,t) = T^nabla(X,Y) - (1+a)/2 {(nabla_X h)(h^-1 beta) - (nabla_Y h)(h^-1 eta)} + (1-a)/2 {h^-1((nabla_X h)Y) - h^-1((nabla_Y h)X)}",
      true, need_sym_or_skew, [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const std::vector<JetSection> secs = field_sections(d);
          for (double a : c.alphas) {
            const GenConnection D = GenConnection::alpha(d.nabla, d.h, a);
            for (const JetSection& s : secs)
              for (const JetSection& t : secs)
                res.compare(gen_torsion(D, s, t), gen_torsion_closed(d.nabla, d.h, a, values(s), values(t)), d.x);
          }
        }
        res.finish();
      });

  add("torsion_hat_closed_form", "(nabla^* - nabla^)/2 at (s,t) = {h^-1((nabla_X h)(Y)) + (nabla_X h)(h^-1 beta)}/2",
      false, always, [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const int n = d.h.dim();
          const GenConnection hat = GenConnection::lift(LiftKind::hat, d.nabla, d.h);
          const GenConnection dual = GenConnection::lift(LiftKind::dual, d.nabla, d.h);
          for (int i = 0; i < n; ++i)
            for (const JetSection& t : constant_sections(n)) {
              const JetVector X = direction(i, n);
              const Section lhs = 0.5 * (values(dual.apply(X, t)) - values(hat.apply(X, t)));
              const Section s{unit(i, n), Vec<double>(n, 0.0)};
              res.compare(lhs, T_hat(d.nabla, d.h, s, values(t)), d.x);
            }
        }
        res.finish();
      });

  add("gen_d_check_h_reduces", "(d^{nabla^} h-check)(s, t, u) = (d^nabla h)(X, Y, Z)", false, need_sym_or_skew,
      [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const int n = d.h.dim();
          const GenConnection hat = GenConnection::lift(LiftKind::hat, d.nabla, d.h);
          const Tensor3d dnh = d_nabla_h(d.nabla, d.h);
          const std::vector<JetSection> secs = constant_sections(n);
          for (const JetSection& s : secs)
            for (const JetSection& t : secs)
              for (const JetSection& u : secs) {
                const double lhs = gen_d_nabla_pairing(hat, Pairing::check, s, t, u);
                res.compare(lhs, dot_tensor(dnh, values(s.vec), values(t.vec), values(u.vec)), d.x);
              }
        }
        res.finish();
      });

  add("hat_nabla_check_h_closed_form",
      "(nabla^_X h-check)(t, u) = (nabla_X h)(Y, Z) + (nabla_X h)(h^-1 beta, h^-1 gamma)", false, always,
      [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const int n = d.h.dim();
          const GenConnection hat = GenConnection::lift(LiftKind::hat, d.nabla, d.h);
          const std::vector<JetSection> secs = constant_sections(n);
          for (int i = 0; i < n; ++i) {
            const JetSection s = constant_section(Section{unit(i, n), Vec<double>(n, 0.0)}, n);
            for (const JetSection& t : secs)
              for (const JetSection& u : secs)
                res.compare(gen_nabla_pairing(hat, Pairing::check, s, t, u),
                            hat_nabla_check_h_closed(d.nabla, d.h, unit(i, n), values(t), values(u)), d.x);
          }
        }
        res.finish();
      });

  add("hat_is_levi_civita_of_check_h", "T^nabla = 0 and nabla h = 0 imply T^{nabla^} = 0 and nabla^ h-check = 0", false,
      both(need_statistical, need_parallel_h), [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const int n = d.h.dim();
          const GenConnection hat = GenConnection::lift(LiftKind::hat, d.nabla, d.h);
          const std::vector<JetSection> secs = constant_sections(n);
          for (const JetSection& s : secs)
            for (const JetSection& t : secs) {
              res.compare(gen_torsion(hat, s, t), zero_section(n), d.x);
              for (const JetSection& u : secs) res.compare(gen_nabla_pairing(hat, Pairing::check, s, t, u), 0.0, d.x);
            }
        }
        res.finish();
      });

  // ---------- generalized curvature ----------

  // Which generalized connection the tensor is built from; `none` skips it.
  enum class CurvatureOf { hat, dual, alpha, none };
  struct CurvatureAt {
    const PointData& d;
    double a;
    const Curvature& R;
    const GenCurvatureTensor* Rg;
  };
  auto curvature_check = [&](std::string id, std::string anchor, bool alphas, Hyp hyp, CurvatureOf of,
                             std::function<void(const CurvatureAt&, const Vec<double>&, const Vec<double>&, Residual&)>
                                 body) {
    add(std::move(id), std::move(anchor), alphas, std::move(hyp),
        [alphas, of, body](const CheckContext& c, CheckRecord& r) {
          Residual res(r);
          const std::vector<double> single{1.0};
          for (const PointData& d : c.points) {
            const int n = d.h.dim();
            const Curvature R = curvature(d.nabla);
            for (double a : alphas ? c.alphas : single) {
              std::optional<GenCurvatureTensor> Rg;
              if (of == CurvatureOf::hat) Rg.emplace(GenConnection::lift(LiftKind::hat, d.nabla, d.h));
              if (of == CurvatureOf::dual) Rg.emplace(GenConnection::lift(LiftKind::dual, d.nabla, d.h));
              const GenCurvatureTensor* T = Rg ? &*Rg : nullptr;
              if (of == CurvatureOf::alpha) T = &c.curvatures.at(d, a);
              const CurvatureAt at{d, a, R, T};
              for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                  if (i != j) body(at, unit(i, n), unit(j, n), res);
                }
            }
          }
          res.finish();
        });
  };

  curvature_check("hat_curvature_closed_form", "R^{nabla^}(s,t)u = R Z + h(R h^-1 gamma)", false, always,
                  CurvatureOf::hat, [](const CurvatureAt& c, const Vec<double>& X, const Vec<double>& Y, Residual& res) {
                    for (const Section& u : basis_sections(c.d.h.dim()))
                      res.compare(c.Rg->apply(X, Y, u), curvature_hat_closed(c.R, c.d.h, X, Y, u), c.d.x);
                  });

  curvature_check("dual_curvature_closed_form", "R^{nabla^*}(s,t)u = h^-1(R h Z) + R gamma", false, always,
                  CurvatureOf::dual, [](const CurvatureAt& c, const Vec<double>& X, const Vec<double>& Y, Residual& res) {
                    for (const Section& u : basis_sections(c.d.h.dim()))
                      res.compare(c.Rg->apply(X, Y, u), curvature_dual_closed(c.R, c.d.h, X, Y, u), c.d.x);
                  });

  curvature_check("alpha_curvature_combination",
                  "R^(a) = (1+a)/2 R^{nabla^} + (1-a)/2 R^{nabla^*} + (1-a^2){T^(t, T^(s,u)) - T^(s, T^(t,u))}", true,
                  always, CurvatureOf::alpha,
                  [](const CurvatureAt& c, const Vec<double>& X, const Vec<double>& Y, Residual& res) {
                    for (const Section& u : basis_sections(c.d.h.dim()))
                      res.compare(c.Rg->apply(X, Y, u), curvature_alpha_combination(c.d.nabla, c.d.h, c.a, X, Y, u),
                                  c.d.x);
                  });

  auto field_curvature = [](const CurvatureAt& c, const Vec<double>& X, const Vec<double>& Y, Residual& res,
                            Section (*closed)(const Christoffel&, const MetricAt&, double, const JetVector&,
                                              const JetVector&, const JetSection&)) {
    const PointData& d = c.d;
    const int n = d.h.dim();
    const GenConnection D = GenConnection::alpha(d.nabla, d.h, c.a);
    const JetVector Xj = constant_vector(X, n), Yj = constant_vector(Y, n);
    std::vector<JetSection> us = constant_sections(n);
    us.push_back(poly_section(d.x));
    for (const JetSection& u : us) res.compare(gen_curvature(D, Xj, Yj, u), closed(d.nabla, d.h, c.a, Xj, Yj, u), d.x);
  };

  curvature_check("alpha_curvature_expanded_form",
                  "R^(a)(s,t)u expanded in nabla, nabla-of-covectors and h^-1 applied to the fields", true,
                  need_sym_or_skew, CurvatureOf::none,
                  [field_curvature](const CurvatureAt& c, const Vec<double>& X, const Vec<double>& Y, Residual& res) {
                    field_curvature(c, X, Y, res, curvature_alpha_expanded);
                  });

  curvature_check("alpha_curvature_nabla_h_form", "R^(a)(s,t)u rewritten in terms of nabla h and R^nabla", true,
                  need_sym_or_skew, CurvatureOf::none,
                  [field_curvature](const CurvatureAt& c, const Vec<double>& X, const Vec<double>& Y, Residual& res) {
                    field_curvature(c, X, Y, res, curvature_alpha_nabla_h_form);
                  });

  curvature_check("alpha_curvature_parallel_reduction",
                  "nabla h = 0 implies R^(a)(s,t)u = (1+a^2)/2 (R Z + R gamma) + (1-a^2)/4 {h^-1(h(R.,Z)) + RZ + h(R h^-1 gamma) + ...}",
                  true, both(need_sym_or_skew, need_parallel_h), CurvatureOf::alpha,
                  [](const CurvatureAt& c, const Vec<double>& X, const Vec<double>& Y, Residual& res) {
                    for (const Section& u : basis_sections(c.d.h.dim()))
                      res.compare(c.Rg->apply(X, Y, u), curvature_alpha_parallel(c.R, c.d.h, c.a, X, Y, u), c.d.x);
                  });

  curvature_check("alpha_curvature_symmetric_parallel",
                  "h symmetric and nabla h = 0 imply R^(a)(s,t)u = R Z + R gamma for every a", true,
                  both(need_symmetric, need_parallel_h), CurvatureOf::alpha,
                  [](const CurvatureAt& c, const Vec<double>& X, const Vec<double>& Y, Residual& res) {
                    for (const Section& u : basis_sections(c.d.h.dim()))
                      res.compare(c.Rg->apply(X, Y, u), curvature_base_lift(c.R, X, Y, u), c.d.x);
                  });

  add("gen_curvature_tensorial", "R^(a)(X, Y)u computed on non-constant fields equals the tensor on their values",
      true, need_sym_or_skew, [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const JetVector X = poly_vector(d.x, 0), Y = poly_vector(d.x, 1);
          const JetSection u = poly_section(d.x);
          for (double a : c.alphas) {
            const GenConnection D = GenConnection::alpha(d.nabla, d.h, a);
            res.compare(gen_curvature(D, X, Y, u), GenCurvatureTensor(D).apply(values(X), values(Y), values(u)), d.x);
          }
        }
        res.finish();
      });

  // ---------- Ricci ----------

  add("ricci_frame_sum_matches_reduced",
      "1/2 sum over the frame (E_i + hE_i)/sqrt2, (E_i - hE_i)/sqrt2 equals sum_i h-check(R^(a)(E_i, t)u, E_i)", true,
      need_positive_definite, [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const Matrix<double> E = default_frame(d);
          for (double a : c.alphas) {
            const GenCurvatureTensor& R = c.curvatures.at(d, a);
            res.compare(gen_ricci_frame_sum(R, d.h, E), gen_ricci_reduced(R, d.h, E), d.x);
          }
        }
        res.finish();
      });

  add("ricci_closed_form",
      "Ric^(a)(Y, Z) = ((1+a)/2)^2 Ric^nabla + ((1-a)/2)^2 Ric^{nabla*} + (1-a^2)/4 {covariant-derivative terms}", true,
      need_positive_definite, [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const int n = d.h.dim();
          const Matrix<double> E = default_frame(d);
          const JetMatrix EJ = frame_jets(d.h, Matrix<double>::identity(n));
          for (double a : c.alphas)
            res.compare(gen_ricci_closed(d.nabla, d.h, a, EJ), vector_block(reduced_ricci(c, d, a, E), n), d.x);
        }
        res.finish();
      });

  add("ricci_nabla_h_form",
      "Ric^(a)(Y, Z) = (1+a)/2 Ric^nabla + (1-a)/2 Ric^{nabla*} + (1-a^2)/4 {nabla h terms}", true,
      need_positive_definite, [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const int n = d.h.dim();
          const Matrix<double> E = default_frame(d);
          const JetMatrix EJ = frame_jets(d.h, Matrix<double>::identity(n));
          for (double a : c.alphas)
            res.compare(gen_ricci_nabla_h_form(d.nabla, d.h, a, EJ), vector_block(reduced_ricci(c, d, a, E), n), d.x);
        }
        res.finish();
      });

  add("ricci_frame_invariance", "Ric^(a) does not depend on the orthonormal frame", true, need_positive_definite,
      [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        std::mt19937_64 rng(c.scenario.seed ^ 0x9e3779b97f4a7c15ULL);
        std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
        for (const PointData& d : c.points) {
          const int n = d.h.dim();
          // Product of plane rotations in every coordinate plane.
          Matrix<double> start = Matrix<double>::identity(n);
          for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
              const double t = angle(rng);
              Matrix<double> G = Matrix<double>::identity(n);
              G(p, p) = std::cos(t);
              G(q, q) = std::cos(t);
              G(p, q) = -std::sin(t);
              G(q, p) = std::sin(t);
              start = G * start;
            }
          const Matrix<double> E0 = default_frame(d);
          const Matrix<double> E1 = orthonormal_frame(values(d.h.h), start, d.x);
          for (double a : c.alphas) {
            const GenCurvatureTensor& R = c.curvatures.at(d, a);
            res.compare(gen_ricci_reduced(R, d.h, E0), gen_ricci_reduced(R, d.h, E1), d.x);
            res.compare(gen_ricci_frame_sum(R, d.h, E0), gen_ricci_frame_sum(R, d.h, E1), d.x);
          }
        }
        res.finish();
      });

  add("ricci_parallel_reduction",
      "h symmetric and nabla h = 0 imply Ric^(a)(Y+beta, Z+gamma) = Ric^nabla(Y, Z) and scal^(a) = scal^(h, nabla)", true,
      both(need_positive_definite, need_parallel_h), [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const Matrix<double> E = default_frame(d);
          const Matrix<double> base = ricci_base(d.nabla, d.h);
          const double scal = scalar_base(base, d.h);
          for (double a : c.alphas) {
            const Matrix<double> ric = reduced_ricci(c, d, a, E);
            res.compare(ric, embed_vector_block(base), d.x);
            res.compare(gen_scalar(ric, d.h), scal, d.x);
          }
        }
        res.finish();
      });

  add("conjugate_ricci_symmetry", "h symmetric and nabla h = 0 imply Ric^(a) = Ric^(-a)", true,
      both(need_positive_definite, need_parallel_h), [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const Matrix<double> E = default_frame(d);
          for (double a : c.alphas) res.compare(reduced_ricci(c, d, a, E), reduced_ricci(c, d, -a, E), d.x);
        }
        res.finish();
      });

  add("gen_scalar_curvature_value", "nabla h = 0: scal^(h-check, nabla^(a)) equals the constant scal^(h, nabla)", true,
      [](const Scenario& s, const Profile& p) {
        return all_of({s.expected_scalar ? "" : "scenario declares no scalar curvature", need_positive_definite(s, p),
                       need_parallel_h(s, p)});
      },
      [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const Matrix<double> E = default_frame(d);
          for (double a : c.alphas) res.compare(gen_scalar(reduced_ricci(c, d, a, E), d.h), *c.scenario.expected_scalar, d.x);
        }
        res.finish();
      });

  add("equiaffine_criterion",
      "nabla^* is equiaffine iff sum_i {h(R(Y,E_i)E_i, Z) - h(R(Z,E_i)E_i, Y)} = 0 (co-vanishes with the antisymmetric part of Ric^{nabla^*})",
      false, both(need_positive_definite, need_quasi_statistical), [](const CheckContext& c, CheckRecord& r) {
        Peak a, b;
        for (const PointData& d : c.points) {
          const int n = d.h.dim();
          const Matrix<double> E = default_frame(d);
          a.add(max_abs(equiaffine_obstruction(curvature(d.nabla), d.h, E)), d.x);
          b.add(max_abs(antisymmetric_part(vector_block(reduced_ricci(c, d, -1.0, E), n))), d.x);
        }
        covanish(r, "obstruction", a, "ricci_antisymmetry", b);
      });

  // ---------- generalized structures ----------

  add("gen_structure_identities", "J^2 = I (product), J^2 = -I (complex), J^2 = pJ + qI (metallic)", false,
      need_structure, [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points)
          for (StructureKind k : all_kinds()) {
            const GenOperator Jh =
                build_structure(k, d.h, *d.J, c.scenario.metallic_p(), c.scenario.metallic_q(), 1e-8);
            res.add(Jh.identity_defect(), max_abs(Jh.matrix()), d.x);
          }
        res.finish();
      });

  for (StructureKind kind : {StructureKind::product, StructureKind::complex}) {
    const std::string k = to_string(kind);
    add(k + "_nijenhuis_invariance_iff_C1",
        "N^{nabla^(a)} = N^nabla for every a iff F(X,Y,Z) + F(Y,Z,X) - F(X,Z,Y) - F(Y,X,Z) = 0", true,
        both(need_structure, need_statistical), [kind](const CheckContext& c, CheckRecord& r) {
          Peak gap, c1;
          std::optional<Point> joint;
          for (const PointData& d : c.points) {
            const GenOperator Jh = build_structure(kind, d.h, *d.J, 1.0, 1.0, 1e-8);
            double g = 0.0;
            for (double a : c.alphas) g = std::max(g, nijenhuis_alpha_gap(Jh, d.nabla, d.h, a).gap);
            const double cv = max_abs_of(F_conditions(d.h, d.nabla, *d.J).C1.data());
            gap.add(g, d.x);
            c1.add(cv, d.x);
            if (!joint && g > kWitness && cv > kWitness) joint = d.x;
          }
          covanish(r, "nijenhuis_gap", gap, "C1", c1);
          if (joint) r.witness = joint;
          r.measured["joint_witness_found"] = joint ? 1.0 : 0.0;
        });
  }

  add("metallic_nijenhuis_invariance", "J and nabla J h-symmetric imply N^{nabla^(a)} = N^nabla for every a", true,
      [](const Scenario& s, const Profile& p) {
        return all_of({need_structure(s, p), need_statistical(s, p),
                       p.nabla_J_h_symmetric() ? "" : "nabla J is not h-symmetric"});
      },
      [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const GenOperator Jh = build_structure(StructureKind::metallic, d.h, *d.J, c.scenario.metallic_p(),
                                                 c.scenario.metallic_q(), 1e-8);
          for (double a : c.alphas) {
            const NijenhuisGap g = nijenhuis_alpha_gap(Jh, d.nabla, d.h, a);
            res.add(g.gap, g.scale, d.x);
          }
        }
        res.finish();
      });

  for (StructureKind kind : all_kinds()) {
    const std::string k = to_string(kind);
    add(k + "_covdiff_hat_display", "(nabla^_X J^)(Y + beta) written through nabla J and (nabla_X J*)", false,
        need_structure, [kind](const CheckContext& c, CheckRecord& r) {
          Residual res(r);
          for (const PointData& d : c.points) {
            const int n = d.h.dim();
            const GenOperator Jh =
                build_structure(kind, d.h, *d.J, c.scenario.metallic_p(), c.scenario.metallic_q(), 1e-8);
            const GenConnection hat = GenConnection::lift(LiftKind::hat, d.nabla, d.h);
            for (int i = 0; i < n; ++i)
              for (const JetSection& t : constant_sections(n))
                res.compare(gen_covdiff(hat, Jh, direction(i, n), t),
                            covdiff_hat_display(Jh, d.nabla, d.h, *d.J, unit(i, n), values(t)), d.x);
          }
          res.finish();
        });
    add(k + "_covdiff_dual_display", "(nabla^*_X J^)(Y + beta) written through nabla J and (nabla_X J*)", false,
        need_structure, [kind](const CheckContext& c, CheckRecord& r) {
          Residual res(r);
          for (const PointData& d : c.points) {
            const int n = d.h.dim();
            const GenOperator Jh =
                build_structure(kind, d.h, *d.J, c.scenario.metallic_p(), c.scenario.metallic_q(), 1e-8);
            const GenConnection dual = GenConnection::lift(LiftKind::dual, d.nabla, d.h);
            for (int i = 0; i < n; ++i)
              for (const JetSection& t : constant_sections(n))
                res.compare(gen_covdiff(dual, Jh, direction(i, n), t),
                            covdiff_dual_display(Jh, d.nabla, d.h, *d.J, unit(i, n), values(t)), d.x);
          }
          res.finish();
        });
  }

  add("parallel_structures_forward", "nabla J = 0 implies nabla^(a) J^ = 0 for every a and all three structures", true,
      [](const Scenario& s, const Profile& p) {
        return all_of({need_structure(s, p), p.parallel_J() ? "" : "nabla J != 0"});
      },
      [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        for (const PointData& d : c.points) {
          const int n = d.h.dim();
          for (StructureKind k : all_kinds()) {
            const GenOperator Jh =
                build_structure(k, d.h, *d.J, c.scenario.metallic_p(), c.scenario.metallic_q(), 1e-8);
            for (double a : c.alphas) res.add(covdiff_norm(GenConnection::alpha(d.nabla, d.h, a), Jh, n), 0.0, d.x);
            res.add(covdiff_norm(GenConnection::lift(LiftKind::hat, d.nabla, d.h), Jh, n), 0.0, d.x);
            res.add(covdiff_norm(GenConnection::lift(LiftKind::dual, d.nabla, d.h), Jh, n), 0.0, d.x);
          }
        }
        res.finish();
      });

  add("parallel_structures_converse",
      "nabla J != 0 implies nabla^ J^ != 0 and nabla^* J^ != 0, with |nabla^ J^|, |nabla^* J^| >= |nabla J| pointwise",
      true,
      [](const Scenario& s, const Profile& p) {
        return all_of({need_structure(s, p), p.parallel_J() ? "nabla J = 0" : ""});
      },
      [](const CheckContext& c, CheckRecord& r) {
        Residual res(r);
        Peak dJpeak;
        std::map<std::string, double> alpha_max;
        bool witnessed = false;
        for (const PointData& d : c.points) {
          const int n = d.h.dim();
          const double dJ = max_abs_of(nabla_J(d.nabla, *d.J).data());
          dJpeak.add(dJ, d.x);
          for (int ki = 0; ki < 3; ++ki) {
            const StructureKind k = all_kinds()[ki];
            const GenOperator Jh =
                build_structure(k, d.h, *d.J, c.scenario.metallic_p(), c.scenario.metallic_q(), 1e-8);
            const double hn = covdiff_norm(GenConnection::lift(LiftKind::hat, d.nabla, d.h), Jh, n);
            const double dn = covdiff_norm(GenConnection::lift(LiftKind::dual, d.nabla, d.h), Jh, n);
            res.add(std::max(0.0, dJ - std::min(hn, dn)), dJ, d.x);
            if (dJ > kWitness && hn > kWitness && dn > kWitness) witnessed = true;
            for (double a : c.alphas) {
              const double an = covdiff_norm(GenConnection::alpha(d.nabla, d.h, a), Jh, n);
              double& slot = alpha_max[std::string(kStructureKinds[ki]) + "_max_norm_at_alpha_" + fmt(a)];
              slot = std::max(slot, an);
            }
          }
        }
        r.measured = alpha_max;
        r.measured["max_nabla_J"] = dJpeak.value;
        r.witness = dJpeak.at;
        res.finish();
        std::string cancel;
        for (const auto& [key, v] : alpha_max) {
          if (v <= r.tol) cancel += (cancel.empty() ? "" : ", ") + key;
        }
        if (!witnessed) {
          r.status = CheckStatus::fail;
          r.reason = "no sampled point shows |nabla J|, |nabla^ J^| and |nabla^* J^| all above 1e-4";
        }
        if (!cancel.empty()) r.reason += (r.reason.empty() ? "" : "; ") + std::string("cancellation observed: ") + cancel;
      });

  std::sort(R.begin(), R.end(), [](const CheckDef& a, const CheckDef& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < R.size(); ++i) {
    if (R[i].id == R[i - 1].id) throw UsageError("duplicate check id " + R[i].id);
  }
  return R;
}

}  // namespace

const GenCurvatureTensor& AlphaCurvatures::at(const PointData& d, double alpha) const {
  const std::size_t i = static_cast<std::size_t>(&d - points_.data());
  if (i >= points_.size()) throw UsageError("point is not part of this run");
  auto it = cache_[i].find(alpha);
  if (it == cache_[i].end()) it = cache_[i].emplace(alpha, GenCurvatureTensor(GenConnection::alpha(d.nabla, d.h, alpha))).first;
  return it->second;
}

const std::vector<CheckDef>& check_registry() {
  static const std::vector<CheckDef> registry = build_registry();
  return registry;
}

std::vector<std::string> check_ids() {
  std::vector<std::string> ids;
  for (const CheckDef& d : check_registry()) ids.push_back(d.id);
  return ids;
}

CheckReport run(const Scenario& s, const RunOptions& opts) {
  const int npoints = opts.points.value_or(s.points);
  const std::uint64_t seed = opts.seed.value_or(s.seed);
  const double tol = opts.tol.value_or(s.tol);
  const std::vector<double> alphas = opts.alphas.value_or(s.alphas);
  if (npoints < 1) throw ConfigError("point count must be positive");
  if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
  if (alphas.empty()) throw ConfigError("alpha list is empty");

  const std::vector<CheckDef>& registry = check_registry();
  std::set<std::string> selected(s.checks.begin(), s.checks.end());
  for (const std::string& id : selected) {
    if (std::none_of(registry.begin(), registry.end(), [&](const CheckDef& d) { return d.id == id; })) {
      throw ConfigError("unknown check id '" + id + "'");
    }
  }
  for (const auto& [id, v] : s.tolerances) {
    (void)v;
    if (std::none_of(registry.begin(), registry.end(), [&](const CheckDef& d) { return d.id == id; })) {
      throw ConfigError("tolerance override for unknown check id '" + id + "'");
    }
  }

  const std::vector<Point> pts = PointSampler(s.chart(), seed).take(npoints);
  const Profile profile = startup_profile(s, pts, tol);
  std::vector<PointData> data;
  data.reserve(pts.size());
  for (const Point& x : pts) data.push_back(evaluate(s, x));

  const AlphaCurvatures curvatures(data);

  CheckReport rep;
  rep.scenario = s.name;
  rep.seed = seed;
  rep.points = npoints;
  rep.tol = tol;
  rep.alphas = alphas;
  rep.profile = profile.values();
  if (opts.timestamp) rep.timestamp = utc_timestamp();

  for (const CheckDef& def : registry) {
    if (!selected.empty() && !selected.count(def.id)) continue;
    CheckRecord rec;
    rec.id = def.id;
    rec.anchor = def.anchor;
    auto ov = s.tolerances.find(def.id);
    rec.tol = ov != s.tolerances.end() ? ov->second : def.fixed_tol.value_or(tol);
    const std::string why = def.hypothesis(s, profile);
    if (!why.empty()) {
      rec.status = CheckStatus::skipped;
      rec.reason = why;
      rep.checks.push_back(std::move(rec));
      continue;
    }
    if (def.uses_alphas) rec.alphas = alphas;
    const CheckContext ctx{s, profile, data, alphas, rec.tol, curvatures};
    try {
      def.run(ctx, rec);
    } catch (const Error& e) {
      rec.status = CheckStatus::fail;
      rec.reason = std::string("error: ") + e.what();
    }
    rep.checks.push_back(std::move(rec));
  }
  return rep;
}

}  // namespace genverify
