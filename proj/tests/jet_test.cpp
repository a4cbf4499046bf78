#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "genverify/errors.hpp"
#include "genverify/jet.hpp"
#include "support.hpp"

namespace genverify {
namespace {

TEST(Jet, VariableHasUnitGradient) {
  const Jet x = seed(1, 0.5, 3);
  EXPECT_EQ(x.dim(), 3);
  EXPECT_DOUBLE_EQ(x.value(), 0.5);
  EXPECT_DOUBLE_EQ(x.grad(0), 0.0);
  EXPECT_DOUBLE_EQ(x.grad(1), 1.0);
  EXPECT_DOUBLE_EQ(x.hess(1, 1), 0.0);
}

TEST(Jet, ProductRuleToSecondOrder) {
  const Jet x = seed(0, 1.5, 2), y = seed(1, -0.7, 2);
  const Jet f = x * x * y;  // x^2 y
  EXPECT_DOUBLE_EQ(f.value(), 1.5 * 1.5 * -0.7);
  EXPECT_DOUBLE_EQ(f.grad(0), 2 * 1.5 * -0.7);
  EXPECT_DOUBLE_EQ(f.grad(1), 1.5 * 1.5);
  EXPECT_DOUBLE_EQ(f.hess(0, 0), 2 * -0.7);
  EXPECT_DOUBLE_EQ(f.hess(0, 1), 2 * 1.5);
  EXPECT_DOUBLE_EQ(f.hess(1, 0), 2 * 1.5);
  EXPECT_DOUBLE_EQ(f.hess(1, 1), 0.0);
}

TEST(Jet, QuotientAndElementaryFunctions) {
  const double a = 0.3;
  const Jet x = seed(0, a, 1);
  const Jet q = Jet(1.0) / x;
  EXPECT_NEAR(q.grad(0), -1 / (a * a), 1e-12);
  EXPECT_NEAR(q.hess(0, 0), 2 / (a * a * a), 1e-10);
  EXPECT_NEAR(sin(x).hess(0, 0), -std::sin(a), 1e-15);
  EXPECT_NEAR(cos(x).grad(0), -std::sin(a), 1e-15);
  EXPECT_NEAR(exp(x).hess(0, 0), std::exp(a), 1e-15);
  EXPECT_NEAR(log(x).hess(0, 0), -1 / (a * a), 1e-12);
  EXPECT_NEAR(sqrt(x).grad(0), 0.5 / std::sqrt(a), 1e-14);
  EXPECT_NEAR(pow(x, 3.0).hess(0, 0), 6 * a, 1e-14);
}

TEST(Jet, ConstantCombinesWithAnyDimension) {
  const Jet c(2.0);
  EXPECT_EQ(c.dim(), 0);
  const Jet x = seed(2, 1.0, 3);
  const Jet s = c * x + c;
  EXPECT_EQ(s.dim(), 3);
  EXPECT_DOUBLE_EQ(s.value(), 4.0);
  EXPECT_DOUBLE_EQ(s.grad(2), 2.0);
}

TEST(Jet, MixingDimensionsThrows) {
  EXPECT_THROW(seed(0, 1.0, 2) + seed(0, 1.0, 3), UsageError);
}

TEST(Jet, SeedOutOfRangeThrows) {
  EXPECT_THROW(seed(2, 1.0, 2), UsageError);
  EXPECT_THROW(seed(0, 1.0, kMaxDim + 1), UsageError);
}

TEST(Jet, DivisionByZeroThrows) { EXPECT_THROW(Jet(1.0) / seed(0, 0.0, 1), EvaluationError); }

TEST(Jet, PartialIsExactToFirstOrderOnly) {
  const Jet x = seed(0, 0.4, 2), y = seed(1, 1.1, 2);
  const Jet f = x * x * y;
  const Jet fx = partial(f, 0);  // 2xy
  EXPECT_DOUBLE_EQ(fx.value(), 2 * 0.4 * 1.1);
  EXPECT_DOUBLE_EQ(fx.grad(0), 2 * 1.1);
  EXPECT_DOUBLE_EQ(fx.grad(1), 2 * 0.4);
  EXPECT_FALSE(second_order_known(fx));
  EXPECT_TRUE(std::isnan(fx.hess(0, 0)));
  EXPECT_TRUE(second_order_known(f));
}

TEST(Jet, PartialOfConstantIsZero) {
  const Jet p = partial(Jet(3.0), 1);
  EXPECT_EQ(p.value(), 0.0);
  EXPECT_TRUE(second_order_known(p));
}

TEST(Jet, IsZeroLooksAtDerivatives) {
  EXPECT_TRUE(Jet(0.0).is_zero());
  EXPECT_FALSE(seed(0, 0.0, 2).is_zero());
  EXPECT_FALSE(Jet(1e-300).is_zero());
}

TEST(Jet, FiniteDifferenceOracleOnPolynomial) {
  const auto f = [](std::span<const double> x) { return x[0] * x[0] * x[1] + 3 * x[1]; };
  const std::vector<double> x{0.7, -0.2};
  const FdDerivatives d = fd_oracle(f, x, 1e-4);
  EXPECT_NEAR(d.grad[0], 2 * 0.7 * -0.2, 1e-8);
  EXPECT_NEAR(d.grad[1], 0.49 + 3, 1e-8);
  EXPECT_NEAR(d.hess[0][0], -0.4, 1e-6);
  EXPECT_NEAR(d.hess[0][1], 1.4, 1e-6);
}

// Property: jets of random smooth expressions agree with central differences.
TEST(Jet, RandomExpressionsMatchFiniteDifferences) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 3;
    const Expr e = testing::random_expr(rng, n, 4);
    std::vector<double> x(n);
    for (double& v : x) v = coord(rng);
    const Jet j = e.eval_jet(x);
    const FdDerivatives fd = fd_oracle([&](std::span<const double> y) { return e.eval(y); }, x, 1e-4);
    for (int a = 0; a < n; ++a) {
      EXPECT_LE(std::abs(j.grad(a) - fd.grad[a]), 1e-5 * (1 + std::abs(j.grad(a)))) << e.to_string();
      for (int b = 0; b < n; ++b)
        EXPECT_LE(std::abs(j.hess(a, b) - fd.hess[a][b]), 1e-3 * (1 + std::abs(j.hess(a, b)))) << e.to_string();
    }
  }
}

}  // namespace
}  // namespace genverify
