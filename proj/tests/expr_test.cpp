#include <gtest/gtest.h>

#include <cmath>

#include "genverify/errors.hpp"
#include "genverify/expr.hpp"

namespace genverify {
namespace {

double eval_at(const std::string& src, std::vector<double> x) { return parse_expr(src, static_cast<int>(x.size())).eval(x); }

std::size_t error_offset(const std::string& src, int n) {
  try {
    parse_expr(src, n);
  } catch (const ParseError& e) {
    return e.offset();
  }
  ADD_FAILURE() << "no parse error for " << src;
  return 0;
}

TEST(Expr, SquareHasExactJet) {
  const Jet j = parse_expr("x1^2", 1).eval(std::vector<Jet>{seed(0, 3.0, 1)});
  EXPECT_DOUBLE_EQ(j.value(), 9.0);
  EXPECT_DOUBLE_EQ(j.grad(0), 6.0);
  EXPECT_DOUBLE_EQ(j.hess(0, 0), 2.0);
}

TEST(Expr, Precedence) {
  EXPECT_DOUBLE_EQ(eval_at("1 + 2*3", {0}), 7.0);
  EXPECT_DOUBLE_EQ(eval_at("(1 + 2)*3", {0}), 9.0);
  EXPECT_DOUBLE_EQ(eval_at("8/4/2", {0}), 1.0);
  EXPECT_DOUBLE_EQ(eval_at("5 - 3 - 1", {0}), 1.0);
  EXPECT_DOUBLE_EQ(eval_at("-2^2", {0}), -4.0);  // power binds tighter than unary minus
  EXPECT_DOUBLE_EQ(eval_at("2*-x1", {3}), -6.0);
}

TEST(Expr, NegativeAndFractionalLiteralExponents) {
  EXPECT_DOUBLE_EQ(eval_at("x1^-2", {0.5}), 4.0);
  EXPECT_NEAR(eval_at("x1^0.5", {2.0}), std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(eval_at("x1^(2)", {3.0}), 9.0);
}

TEST(Expr, WhitespaceInsensitive) { EXPECT_DOUBLE_EQ(eval_at("  x1 *  2 ", {1.5}), eval_at("x1*2", {1.5})); }

TEST(Expr, Functions) {
  const std::vector<double> x{0.3, 1.7};
  EXPECT_DOUBLE_EQ(eval_at("exp(x1)*log(x2)", x), std::exp(0.3) * std::log(1.7));
  EXPECT_DOUBLE_EQ(eval_at("sin(x1) + cos(x2) + sqrt(x2)", x), std::sin(0.3) + std::cos(1.7) + std::sqrt(1.7));
  EXPECT_DOUBLE_EQ(eval_at("1e-3*x2", x), 1e-3 * 1.7);
}

TEST(Expr, ParsedTreeEqualsBuiltTree) {
  const Expr built = Expr::binary(Expr::Kind::add, Expr::power(Expr::variable(0, 2), 2.0),
                                  Expr::call(Expr::Function::sin, Expr::variable(1, 2)));
  EXPECT_TRUE(parse_expr("x1^2 + sin(x2)", 2) == built);
  EXPECT_EQ(built.kind(), Expr::Kind::add);
  EXPECT_EQ(built.lhs().kind(), Expr::Kind::pow);
  EXPECT_DOUBLE_EQ(built.lhs().number(), 2.0);
  EXPECT_EQ(built.rhs().function(), Expr::Function::sin);
}

TEST(Expr, PrintedFormReparses) {
  for (const char* src : {"x1^2 + sin(x2)", "-x1*(x2 - 3)/(1 + x1^2)", "exp(-x1)^-2", "sqrt(1 + x2^2) - 0.5"}) {
    const Expr e = parse_expr(src, 2);
    const Expr again = parse_expr(e.to_string(), 2);
    const std::vector<double> x{0.4, -1.3};
    EXPECT_DOUBLE_EQ(e.eval(x), again.eval(x)) << src << " printed as " << e.to_string();
  }
}

TEST(Expr, VariableOutOfRangeReportsOffset) {
  EXPECT_EQ(error_offset("x1 + x3", 2), 5u);
  EXPECT_THROW(parse_expr("x0", 2), ParseError);
}

TEST(Expr, SyntaxErrorsReportOffsets) {
  EXPECT_EQ(error_offset("sin(x1", 2), 6u);
  EXPECT_EQ(error_offset("1 +", 2), 3u);
  EXPECT_EQ(error_offset("", 2), 0u);
  EXPECT_EQ(error_offset("x1 x2", 2), 3u);
  EXPECT_EQ(error_offset("(x1)*)", 2), 5u);
  EXPECT_EQ(error_offset("foo(x1)", 2), 0u);
  EXPECT_EQ(error_offset("3.5.2", 2), 0u);
}

TEST(Expr, NonLiteralExponentRejected) {
  EXPECT_EQ(error_offset("2^x1", 2), 2u);
  EXPECT_EQ(error_offset("x2^2^1", 2), 3u);
}

TEST(Expr, DomainErrorsAtEvaluation) {
  EXPECT_THROW(eval_at("x1/0", {1.0}), EvaluationError);
  EXPECT_THROW(eval_at("log(x1)", {-1.0}), EvaluationError);
  EXPECT_THROW(eval_at("sqrt(x1)", {-1.0}), EvaluationError);
}

}  // namespace
}  // namespace genverify
