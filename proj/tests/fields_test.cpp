#include <gtest/gtest.h>

#include <cmath>

#include "genverify/errors.hpp"
#include "genverify/fields.hpp"
#include "support.hpp"

namespace genverify {
namespace {

using testing::max_abs_diff;

TEST(Sampler, SameSeedSamePoints) {
  const Chart chart({{-1, 1}, {0.5, 3}});
  EXPECT_EQ(PointSampler(chart, 42).take(20), PointSampler(chart, 42).take(20));
  EXPECT_NE(PointSampler(chart, 42).take(20), PointSampler(chart, 43).take(20));
}

TEST(Sampler, PointsStayInsideTheChart) {
  const Chart chart({{-1, 1}, {0.5, 3}, {2, 2.001}});
  for (const Point& x : PointSampler(chart, 5).take(500)) EXPECT_TRUE(chart.contains(x)) << format_point(x);
}

TEST(FieldSpec, ComponentLayout) {
  const FieldSpec J = FieldSpec::from_strings(2, 1, 1, {"1", "x1", "x2", "x1*x2"});
  const JetMatrix m = eval_matrix_field(J, std::vector<double>{2.0, 3.0});
  EXPECT_DOUBLE_EQ(m(0, 1).value(), 2.0);
  EXPECT_DOUBLE_EQ(m(1, 0).value(), 3.0);
  EXPECT_DOUBLE_EQ(m(1, 1).grad(0), 3.0);
  EXPECT_DOUBLE_EQ(m(1, 1).hess(0, 1), 1.0);
  EXPECT_THROW(FieldSpec::from_strings(2, 0, 2, {"1", "0", "0"}), Error);
}

TEST(Metric, FlatAndSharpOfExponentialMetric) {
  const FieldSpec h = FieldSpec::from_strings(2, 0, 2, {"exp(x1)", "0", "0", "1"});
  const MetricAt g = metric_at(h, SymmetryKind::symmetric, std::vector<double>{std::log(2.0), 0.0});
  const Matrix<double> hv = values(g.h);
  const Matrix<double> hi = values(g.h_inv);
  EXPECT_NEAR(max_abs_diff(flat(hv, Vec<double>{1, 0}), {2, 0}), 0.0, 1e-15);
  EXPECT_NEAR(max_abs_diff(sharp(hi, Vec<double>{1, 0}), {0.5, 0}), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(g.dh(0, 0, 0), 2.0);
  EXPECT_DOUBLE_EQ(g.ddh(0, 0, 0, 0), 2.0);
}

TEST(Metric, SharpInvertsFlatForNonSymmetricH) {
  Matrix<double> h(3, 3);
  const double entries[9] = {2, 0.3, -1, 0.7, 1.5, 0.2, 0.1, -0.4, 3};
  for (int i = 0; i < 9; ++i) h(i / 3, i % 3) = entries[i];
  const Matrix<double> hi = inverse(h);
  const Vec<double> X{0.3, -1.2, 2.0};
  const Vec<double> eta{1.0, 0.5, -0.25};
  EXPECT_LT(max_abs_diff(sharp(hi, flat(h, X)), X), 1e-14);
  EXPECT_LT(max_abs_diff(flat(h, sharp(hi, eta)), eta), 1e-14);
  // flat(X) evaluated on d_j is h(X, d_j)
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(flat(h, X)[j], bilinear(h, X, testing::unit_vec(j, 3)), 1e-15);
}

TEST(Metric, DeclaredSymmetryIsEnforced) {
  const Point x{0.1, 0.2};
  const FieldSpec skew = FieldSpec::from_strings(2, 0, 2, {"0", "1", "-1", "0"});
  EXPECT_THROW(metric_at(skew, SymmetryKind::symmetric, x), ValidationError);
  EXPECT_NO_THROW(metric_at(skew, SymmetryKind::skew, x));
  const FieldSpec sym = FieldSpec::from_strings(2, 0, 2, {"1", "x1", "x1", "2"});
  EXPECT_THROW(metric_at(sym, SymmetryKind::skew, x), ValidationError);
  EXPECT_NO_THROW(metric_at(sym, SymmetryKind::general, x));
}

TEST(Metric, DegenerateMetricThrows) {
  const FieldSpec h = FieldSpec::from_strings(2, 0, 2, {"1", "1", "1", "1"});
  EXPECT_THROW(metric_at(h, SymmetryKind::symmetric, std::vector<double>{0.0, 0.0}), DegeneracyError);
}

TEST(Metric, OrthonormalFrame) {
  const FieldSpec h = FieldSpec::from_strings(2, 0, 2, {"2 + x1", "0.5", "0.5", "1"});
  const MetricAt g = metric_at(h, SymmetryKind::symmetric, std::vector<double>{0.4, 0.0});
  const Matrix<double> E = orthonormal_frame(values(g.h));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      Vec<double> ea{E(a, 0), E(a, 1)}, eb{E(b, 0), E(b, 1)};
      EXPECT_NEAR(bilinear(values(g.h), ea, eb), a == b ? 1.0 : 0.0, 1e-14);
    }
  const FieldSpec lorentz = FieldSpec::from_strings(2, 0, 2, {"1", "0", "0", "-1"});
  const MetricAt l = metric_at(lorentz, SymmetryKind::symmetric, std::vector<double>{0.0, 0.0});
  EXPECT_THROW(orthonormal_frame(values(l.h)), FrameError);
}

}  // namespace
}  // namespace genverify
