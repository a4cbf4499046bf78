#include <gtest/gtest.h>

#include <cmath>

#include "genverify/gen_bundle.hpp"
#include "support.hpp"

namespace genverify {
namespace {

using testing::builtin_at;
using testing::builtin_points;
using testing::max_abs_diff;
using testing::unit_vec;

JetVector dir(int i, int n) { return constant_vector(unit_vec(i, n), n); }

JetSection basis(int a, int n) { return constant_section(basis_section(a, n), n); }

// Lift coefficients from central differences of h^-1 and h, independent of
// the jet machinery. Column a of the result at direction i.
Section fd_lift(const Scenario& s, LiftKind kind, const Point& x, int i, int a) {
  const int n = s.dim;
  const double step = 1e-5;
  const PointData d = evaluate(s, x);
  const Matrix<double> h = values(d.h.h), hi = values(d.h.h_inv);
  Point xp = x, xm = x;
  xp[i] += step;
  xm[i] -= step;
  const PointData dp = evaluate(s, xp), dm = evaluate(s, xm);
  Section out = zero_section(n);
  auto cov_deriv_vector = [&](const Vec<double>& V, const Vec<double>& dV) {
    Vec<double> r = dV;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) r[k] += d.nabla.value(k, i, j) * V[j];
    return r;
  };
  auto cov_deriv_covector = [&](const Vec<double>& w, const Vec<double>& dw) {
    Vec<double> r = dw;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) r[j] -= d.nabla.value(k, i, j) * w[k];
    return r;
  };
  const bool is_vec = a < n;
  const Vec<double> e = unit_vec(is_vec ? a : a - n, n);
  if (is_vec) {
    if (kind == LiftKind::dual) {
      // h^-1 (nabla_X (h Y))
      const Vec<double> w = flat(h, e);
      const Vec<double> dw = (1.0 / (2 * step)) * (flat(values(dp.h.h), e) - flat(values(dm.h.h), e));
      out.vec = sharp(hi, cov_deriv_covector(w, dw));
    } else {
      out.vec = cov_deriv_vector(e, Vec<double>(n, 0.0));
    }
  } else {
    if (kind == LiftKind::hat) {
      // h(nabla_X (h^-1 beta))
      const Vec<double> V = sharp(hi, e);
      const Vec<double> dV = (1.0 / (2 * step)) * (sharp(values(dp.h.h_inv), e) - sharp(values(dm.h.h_inv), e));
      out.cov = flat(h, cov_deriv_vector(V, dV));
    } else {
      out.cov = cov_deriv_covector(e, Vec<double>(n, 0.0));
    }
  }
  return out;
}

TEST(Lifts, MatchFiniteDifferenceOracle) {
  for (const char* name : {"torsion-generic", "skew-generic", "exp-diag"}) {
    const Scenario s = builtin_scenario(name);
    for (const Point& x : builtin_points(name, 3)) {
      const PointData d = evaluate(s, x);
      for (LiftKind kind : {LiftKind::hat, LiftKind::check, LiftKind::dual}) {
        const GenConnection D = GenConnection::lift(kind, d.nabla, d.h);
        const GenConnectionAt coef = D.coefficients();
        for (int i = 0; i < s.dim; ++i)
          for (int a = 0; a < 2 * s.dim; ++a) {
            const Section fd = fd_lift(s, kind, x, i, a);
            const Section got = values(D.apply(dir(i, s.dim), basis(a, s.dim)));
            EXPECT_LT(max_abs_difference(got, fd), 1e-8) << name << " kind " << static_cast<int>(kind);
            for (int r = 0; r < 2 * s.dim; ++r) {
              const double want = r < s.dim ? got.vec[r] : got.cov[r - s.dim];
              EXPECT_DOUBLE_EQ(coef.blocks[i](r, a), want);
            }
          }
      }
    }
  }
}

TEST(Lifts, AlphaEndpointsAndMidpoint) {
  const PointData d = builtin_at("torsion-generic", {0.3, -0.2});
  const auto hat = GenConnection::lift(LiftKind::hat, d.nabla, d.h);
  const auto dual = GenConnection::lift(LiftKind::dual, d.nabla, d.h);
  for (int a = 0; a < 4; ++a) {
    const JetSection t = basis(a, 2);
    const Section h1 = values(hat.apply(dir(0, 2), t));
    const Section d1 = values(dual.apply(dir(0, 2), t));
    EXPECT_LT(max_abs_difference(values(GenConnection::alpha(d.nabla, d.h, 1.0).apply(dir(0, 2), t)), h1), 1e-15);
    EXPECT_LT(max_abs_difference(values(GenConnection::alpha(d.nabla, d.h, -1.0).apply(dir(0, 2), t)), d1), 1e-15);
    EXPECT_LT(max_abs_difference(values(GenConnection::alpha(d.nabla, d.h, 0.0).apply(dir(0, 2), t)),
                                 0.5 * h1 + 0.5 * d1),
              1e-15);
  }
}

TEST(Lifts, HatEqualsCheckWhenHIsParallel) {
  const PointData d = builtin_at("sphere", {1.0, 0.0});
  const auto hat = GenConnection::lift(LiftKind::hat, d.nabla, d.h).coefficients();
  const auto chk = GenConnection::lift(LiftKind::check, d.nabla, d.h).coefficients();
  for (int i = 0; i < 2; ++i) EXPECT_LT(max_abs(hat.blocks[i] - chk.blocks[i]), 1e-14);
  const PointData e = builtin_at("exp-diag", {0.2, 0.0});
  const auto hat2 = GenConnection::lift(LiftKind::hat, e.nabla, e.h).coefficients();
  const auto chk2 = GenConnection::lift(LiftKind::check, e.nabla, e.h).coefficients();
  EXPECT_GT(max_abs(hat2.blocks[0] - chk2.blocks[0]), 0.5);
}

TEST(Pairings, CheckPairingOnBasis) {
  const PointData d = builtin_at("exp-diag", {std::log(2.0), 0.0});
  // h-check(dx^1, dx^1) = h^11 = 1/2 and h-check(d_1, d_1) = 2
  EXPECT_NEAR(pairing(Pairing::check, d.h, basis_section(2, 2), basis_section(2, 2)), 0.5, 1e-15);
  EXPECT_NEAR(pairing(Pairing::check, d.h, basis_section(0, 2), basis_section(0, 2)), 2.0, 1e-15);
  EXPECT_NEAR(pairing(Pairing::indefinite, d.h, basis_section(0, 2), basis_section(2, 2)), -0.5, 1e-15);
  EXPECT_NEAR(pairing(Pairing::symplectic, d.h, basis_section(0, 2), basis_section(2, 2)), 0.5, 1e-15);
}

TEST(Duality, HatAndDualAreCheckDual) {
  for (const char* name : {"torsion-generic", "skew-generic"}) {
    for (const Point& x : builtin_points(name, 3)) {
      const PointData d = builtin_at(name, x);
      const auto hat = GenConnection::lift(LiftKind::hat, d.nabla, d.h);
      const auto dual = GenConnection::lift(LiftKind::dual, d.nabla, d.h);
      for (int i = 0; i < 2; ++i)
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) {
            const JetSection t = basis(a, 2), u = basis(b, 2);
            const double lhs = derivative_along(dir(i, 2), pairing(Pairing::check, d.h, t, u)).value();
            const double rhs = pairing(Pairing::check, d.h, values(hat.apply(dir(i, 2), t)), values(u)) +
                               pairing(Pairing::check, d.h, values(t), values(dual.apply(dir(i, 2), u)));
            EXPECT_NEAR(lhs, rhs, 1e-12) << name;
          }
    }
  }
}

// The displayed midpoint formula carries half of the check connection where
// the midpoint of hat and dual carries all of it.
TEST(AverageConnection, DisplayDiffersByHalfTheCheckConnection) {
  for (const char* name : {"torsion-generic", "exp-diag", "sphere"}) {
    const PointData d = builtin_at(name, builtin_points(name, 1)[0]);
    const auto avg = GenConnection::alpha(d.nabla, d.h, 0.0);
    const auto chk = GenConnection::lift(LiftKind::check, d.nabla, d.h);
    for (int i = 0; i < 2; ++i)
      for (int a = 0; a < 4; ++a) {
        const JetSection t = basis(a, 2);
        const Section gap = values(avg.apply(dir(i, 2), t)) - average_connection_closed(d.nabla, d.h, dir(i, 2), t);
        EXPECT_LT(max_abs_difference(gap, 0.5 * values(chk.apply(dir(i, 2), t))), 1e-13) << name;
      }
  }
}

TEST(Torsion, AlphaTorsionClosedForm) {
  for (const Point& x : builtin_points("torsion-generic", 3)) {
    const PointData d = builtin_at("torsion-generic", x);
    for (double a : {-2.0, 0.0, 0.5, 1.0}) {
      const auto D = GenConnection::alpha(d.nabla, d.h, a);
      for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 4; ++q) {
          const Section s = basis_section(p, 2), t = basis_section(q, 2);
          EXPECT_LT(max_abs_difference(gen_torsion(D, constant_section(s, 2), constant_section(t, 2)),
                                       gen_torsion_closed(d.nabla, d.h, a, s, t)),
                    1e-12);
        }
    }
  }
}

TEST(Brackets, AlphaBracketClosedForm) {
  const PointData d = builtin_at("cubic-curved", {0.3, 0.7});
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q) {
      const JetSection s = basis(p, 2), t = basis(q, 2);
      EXPECT_LT(max_abs_difference(values(alpha_bracket(d.nabla, d.h, 0.5, s, t)),
                                   alpha_bracket_closed(d.nabla, d.h, 0.5, s, t)),
                1e-13);
    }
}

TEST(Curvature, TensorAgreesWithFieldComputation) {
  const PointData d = builtin_at("torsion-generic", {0.3, -0.5});
  const auto D = GenConnection::alpha(d.nabla, d.h, 0.5);
  const GenCurvatureTensor R(D);
  for (int a = 0; a < 4; ++a) {
    const Section direct = gen_curvature(D, dir(0, 2), dir(1, 2), basis(a, 2));
    EXPECT_LT(max_abs_difference(direct, R.apply(unit_vec(0, 2), unit_vec(1, 2), basis_section(a, 2))), 1e-12);
  }
}

TEST(Curvature, HatAndDualClosedForms) {
  for (const char* name : {"torsion-generic", "exp-diag"}) {
    const PointData d = builtin_at(name, builtin_points(name, 1)[0]);
    const Curvature Rb = curvature(d.nabla);
    const GenCurvatureTensor Rh(GenConnection::lift(LiftKind::hat, d.nabla, d.h));
    const GenCurvatureTensor Rd(GenConnection::lift(LiftKind::dual, d.nabla, d.h));
    const Vec<double> X{1, 0.2}, Y{-0.3, 1};
    for (int a = 0; a < 4; ++a) {
      const Section u = basis_section(a, 2);
      EXPECT_LT(max_abs_difference(Rh.apply(X, Y, u), curvature_hat_closed(Rb, d.h, X, Y, u)), 1e-11) << name;
      EXPECT_LT(max_abs_difference(Rd.apply(X, Y, u), curvature_dual_closed(Rb, d.h, X, Y, u)), 1e-11) << name;
    }
  }
}

TEST(Ricci, ParallelMetricReducesToBaseRicci) {
  for (const char* name : {"sphere", "hyperbolic3"}) {
    const PointData d = builtin_at(name, builtin_points(name, 1)[0]);
    const int n = d.h.dim();
    const Matrix<double> E = orthonormal_frame(values(d.h.h));
    const Matrix<double> base = ricci_base(d.nabla, d.h);
    for (double a : {-1.0, 0.5, 2.0}) {
      const GenCurvatureTensor R(GenConnection::alpha(d.nabla, d.h, a));
      const Matrix<double> ric = gen_ricci_reduced(R, d.h, E);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) EXPECT_NEAR(ric(i, j), base(i, j), 1e-10) << name;
      EXPECT_NEAR(gen_scalar(ric, d.h), scalar_base(base, d.h), 1e-10) << name;
      EXPECT_LT(max_abs(gen_ricci_frame_sum(R, d.h, E) - ric), 1e-10);
    }
  }
}

// The nabla h rewriting of the Ricci formula misses a curvature term when
// nabla h and R are both nonzero; the covariant-derivative form is exact.
TEST(Ricci, ClosedFormExactNablaHFormMissesCurvatureTerm) {
  const PointData d = builtin_at("cubic-curved", {0.4, 0.6});
  const Matrix<double> E = orthonormal_frame(values(d.h.h));
  const JetMatrix EJ = frame_jets(d.h, Matrix<double>::identity(2));
  const double a = 0.5;
  const Matrix<double> ric = gen_ricci_reduced(GenCurvatureTensor(GenConnection::alpha(d.nabla, d.h, a)), d.h, E);
  const Matrix<double> closed = gen_ricci_closed(d.nabla, d.h, a, EJ);
  const Matrix<double> nh = gen_ricci_nabla_h_form(d.nabla, d.h, a, EJ);
  double closed_err = 0.0, nh_err = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      closed_err = std::max(closed_err, std::abs(closed(i, j) - ric(i, j)));
      nh_err = std::max(nh_err, std::abs(nh(i, j) - ric(i, j)));
    }
  EXPECT_LT(closed_err, 1e-11);
  EXPECT_GT(nh_err, 1e-3);
}

}  // namespace
}  // namespace genverify
