#include <gtest/gtest.h>

#include <cmath>

#include "genverify/base_geometry.hpp"
#include "genverify/errors.hpp"
#include "support.hpp"

namespace genverify {
namespace {

using testing::builtin_at;
using testing::builtin_points;

// Curvature from finite differences of the connection values alone.
double fd_curvature(const Scenario& s, const Point& x, int l, int k, int i, int j) {
  const int n = s.dim;
  const double step = 1e-5;
  auto gamma_at = [&](const Point& y) { return evaluate(s, y).nabla; };
  auto d = [&](int dir, int a, int b, int c) {
    Point xp = x, xm = x;
    xp[dir] += step;
    xm[dir] -= step;
    return (gamma_at(xp).value(a, b, c) - gamma_at(xm).value(a, b, c)) / (2 * step);
  };
  const Christoffel G = gamma_at(x);
  double r = d(i, l, j, k) - d(j, l, i, k);
  for (int m = 0; m < n; ++m) r += G.value(l, i, m) * G.value(m, j, k) - G.value(l, j, m) * G.value(m, i, k);
  return r;
}

TEST(LeviCivita, SphereSymbols) {
  const double th = 1.1;
  const PointData d = builtin_at("sphere", {th, 0.2});
  EXPECT_NEAR(d.nabla.value(0, 1, 1), -std::sin(th) * std::cos(th), 1e-14);
  EXPECT_NEAR(d.nabla.value(1, 0, 1), std::cos(th) / std::sin(th), 1e-14);
  EXPECT_NEAR(d.nabla.value(1, 1, 0), std::cos(th) / std::sin(th), 1e-14);
  EXPECT_NEAR(d.nabla.value(0, 0, 0), 0.0, 1e-15);
}

TEST(LeviCivita, MetricAndTorsionFree) {
  for (const Point& x : builtin_points("torsion-generic", 10)) {
    const PointData d = builtin_at("torsion-generic", x);
    const Christoffel lc = levi_civita(d.h);
    EXPECT_LT(max_abs(Vec<double>(torsion(lc).data())), 1e-13);
    EXPECT_LT(max_abs(Vec<double>(nabla_h(lc, d.h).data())), 1e-13);
  }
}

TEST(Curvature, MatchesFiniteDifferencesOfConnection) {
  const Scenario s = builtin_scenario("torsion-generic");
  for (const Point& x : builtin_points("torsion-generic", 3)) {
    const Curvature R = curvature(evaluate(s, x).nabla);
    for (int l = 0; l < 2; ++l)
      for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) EXPECT_NEAR(R(l, k, i, j), fd_curvature(s, x, l, k, i, j), 1e-7);
  }
}

TEST(Curvature, ConstantCurvatureScalars) {
  const struct {
    const char* name;
    double scalar;
  } cases[] = {{"sphere", 2.0}, {"gauss-fisher", -1.0}, {"hyperbolic3", -6.0}, {"flat-euclid", 0.0}};
  for (const auto& c : cases) {
    for (const Point& x : builtin_points(c.name, 5)) {
      const PointData d = builtin_at(c.name, x);
      const Matrix<double> ric = ricci_base(d.nabla, d.h);
      EXPECT_NEAR(scalar_base(ric, d.h), c.scalar, 1e-10) << c.name << " at " << format_point(x);
    }
  }
}

TEST(Curvature, SphereRicciEqualsMetric) {
  const PointData d = builtin_at("sphere", {0.8, -0.3});
  EXPECT_LT(max_abs(ricci_base(d.nabla, d.h) - values(d.h.h)), 1e-12);
}

TEST(Curvature, CovectorActionIsMinusTranspose) {
  const PointData d = builtin_at("torsion-generic", {0.3, -0.4});
  const Curvature R = curvature(d.nabla);
  const Vec<double> X{1, 0.5}, Y{-0.2, 1}, W{0.7, 0.1}, g{0.3, -1.1};
  EXPECT_NEAR(dot(R.apply_covector(X, Y, g), W), -dot(g, R.apply(X, Y, W)), 1e-14);
}

// X h(Y, Z) = h(nabla_X Y, Z) + h(Y, nabla*_X Z) on coordinate fields.
double duality_residual(const Christoffel& nabla, const Christoffel& dual, const MetricAt& h) {
  const int n = h.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double rhs = 0.0;
        for (int l = 0; l < n; ++l) rhs += nabla.value(l, i, j) * h.value(l, k) + h.value(j, l) * dual.value(l, i, k);
        worst = std::max(worst, std::abs(h.dh(i, j, k) - rhs));
      }
  return worst;
}

TEST(DualConnection, SatisfiesDuality) {
  for (const char* name : {"torsion-generic", "cubic-curved", "skew-generic", "hessian-flat"}) {
    for (const Point& x : builtin_points(name, 5)) {
      const PointData d = builtin_at(name, x);
      EXPECT_LT(duality_residual(d.nabla, dual_connection(d.nabla, d.h), d.h), 1e-12) << name;
    }
  }
}

TEST(DualConnection, IsAnInvolution) {
  const PointData d = builtin_at("torsion-generic", {0.2, 0.6});
  const Christoffel twice = dual_connection(dual_connection(d.nabla, d.h), d.h);
  EXPECT_LT(max_abs_difference(twice, d.nabla), 1e-12);
}

TEST(DualConnection, LeviCivitaIsSelfDual) {
  const PointData d = builtin_at("gauss-fisher", {0.1, 1.3});
  EXPECT_LT(max_abs_difference(dual_connection(d.nabla, d.h), d.nabla), 1e-13);
}

TEST(DualConnection, HessianMetricHasFlatDual) {
  for (const Point& x : builtin_points("hessian-flat", 5)) {
    const PointData d = builtin_at("hessian-flat", x);
    const Christoffel dual = dual_connection(d.nabla, d.h);
    const Curvature R = curvature(dual);
    double worst = 0.0;
    for (int l = 0; l < 2; ++l)
      for (int k = 0; k < 2; ++k) worst = std::max(worst, std::abs(R(l, k, 0, 1)));
    EXPECT_LT(worst, 1e-11);
    EXPECT_LT(max_abs(Vec<double>(torsion(dual).data())), 1e-12);
  }
}

TEST(DualConnection, ConstantSkewFormWithFlatConnection) {
  const PointData d = builtin_at("skew", {0.3, 0.4});
  const Christoffel dual = dual_connection(d.nabla, d.h);
  EXPECT_LT(max_abs_difference(dual, d.nabla), 1e-15);
  EXPECT_LT(max_abs(Vec<double>(torsion(dual).data())), 1e-15);
}

TEST(DualConnection, RejectsGeneralForm) {
  const FieldSpec h = FieldSpec::from_strings(2, 0, 2, {"2", "1", "0", "1"});
  const MetricAt g = metric_at(h, SymmetryKind::general, std::vector<double>{0, 0});
  EXPECT_THROW(dual_connection(zero_connection(2), g), Error);
}

TEST(AlphaConnection, Endpoints) {
  const PointData d = builtin_at("torsion-generic", {0.2, 0.6});
  const Christoffel dual = dual_connection(d.nabla, d.h);
  EXPECT_LT(max_abs_difference(alpha_connection(d.nabla, dual, 1.0), d.nabla), 1e-15);
  EXPECT_LT(max_abs_difference(alpha_connection(d.nabla, dual, -1.0), dual), 1e-15);
}

TEST(Statistical, CubicExampleHasClosedNablaH) {
  for (const Point& x : builtin_points("cubic-curved", 5)) {
    const PointData d = builtin_at("cubic-curved", x);
    EXPECT_LT(max_abs(Vec<double>(d_nabla_h(d.nabla, d.h).data())), 1e-14);
    EXPECT_GT(max_abs(Vec<double>(nabla_h(d.nabla, d.h).data())), 1e-3);
  }
}

TEST(NablaJ, JetValuesMatchValueOnlyVersion) {
  const PointData d = builtin_at("twin-perturbed", {0.4, -0.1});
  const Tensor3<Jet> jets = nabla_J_jets(d.nabla, *d.J);
  const Tensor3d vals = nabla_J(d.nabla, *d.J);
  for (std::size_t a = 0; a < vals.data().size(); ++a) EXPECT_DOUBLE_EQ(jets.data()[a].value(), vals.data()[a]);
}

TEST(NablaJ, HessianOfPotentialIsClosed) {
  for (const Point& x : builtin_points("twin-hessian", 5)) {
    const PointData d = builtin_at("twin-hessian", x);
    const FConditions f = F_conditions(d.h, d.nabla, *d.J);
    EXPECT_LT(max_abs(Vec<double>(f.dJ.data())), 1e-14);
  }
  const PointData p = builtin_at("twin-perturbed", {0.4, 0.2});
  EXPECT_GT(max_abs(Vec<double>(F_conditions(p.h, p.nabla, *p.J).dJ.data())), 0.1);
}

TEST(Twin, MetricIsGTimesJ) {
  const PointData d = builtin_at("twin-perturbed", {0.4, 0.2});
  const MetricAt t = twin_metric(d.h, *d.J);
  const Matrix<double> expected = values(d.h.h) * values(*d.J);
  EXPECT_LT(max_abs(values(t.h) - expected), 1e-15);
  EXPECT_NEAR(t.dh(0, 0, 0), std::cos(0.4), 1e-14);
}

TEST(Twin, DualIsDualForTwinMetric) {
  for (const char* name : {"twin-perturbed", "golden-wave", "twin-diag"}) {
    for (const Point& x : builtin_points(name, 5)) {
      const PointData d = builtin_at(name, x);
      const MetricAt t = twin_metric(d.h, *d.J);
      EXPECT_LT(duality_residual(d.nabla, twin_dual(d.nabla, *d.J), t), 1e-12) << name;
    }
  }
}

TEST(Twin, AlphaFamilyInterpolates) {
  const PointData d = builtin_at("twin-perturbed", {0.4, 0.2});
  const Christoffel dual = twin_dual(d.nabla, *d.J);
  const Christoffel mid = twin_alpha(d.nabla, *d.J, 0.0);
  EXPECT_LT(max_abs_difference(mid, 0.5 * d.nabla + 0.5 * dual), 1e-15);
}

TEST(Metallic, ObstructionClosedForm) {
  for (const Point& x : builtin_points("golden-wave", 5)) {
    const PointData d = builtin_at("golden-wave", x);
    const MetallicObstruction m = metallic_obstruction(d.nabla, *d.J, 1.0, 1.0);
    EXPECT_LT(testing::max_abs_diff(m.commutator.data(), m.closed.data()), 1e-13);
    EXPECT_GT(max_abs(Vec<double>(m.commutator.data())), 1e-3);
  }
}

TEST(Metallic, RejectsNonMetallicJ) {
  const PointData d = builtin_at("twin-perturbed", {0.4, 0.2});
  EXPECT_GT(metallic_defect(*d.J, 1.0, 1.0), 0.1);
  EXPECT_THROW(metallic_obstruction(d.nabla, *d.J, 1.0, 1.0), ValidationError);
}

}  // namespace
}  // namespace genverify
