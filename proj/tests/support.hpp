#pragma once

#include <cmath>
#include <random>
#include <string>

#include "genverify/scenario.hpp"

namespace genverify::testing {

inline PointData builtin_at(const std::string& name, const Point& x) { return evaluate(builtin_scenario(name), x); }

inline std::vector<Point> builtin_points(const std::string& name, int count, std::uint64_t seed = 7) {
  return PointSampler(builtin_scenario(name).chart(), seed).take(count);
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs_diff(const Matrix<double>& a, const Matrix<double>& b) { return max_abs(a - b); }

// Random smooth expression in n variables, defined on all of R^n.
inline Expr random_expr(std::mt19937_64& rng, int n, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 9 : 1);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_int_distribution<int> var(0, n - 1);
  const auto positive = [&](const Expr& e) {
    return Expr::binary(Expr::Kind::add, Expr::number(1.0, n), Expr::power(e, 2.0));
  };
  switch (pick(rng)) {
    case 0: {
      const double c = coef(rng);  // literals are non-negative
      return c < 0 ? Expr::negate(Expr::number(-c, n)) : Expr::number(c, n);
    }
    case 1:
      return Expr::variable(var(rng), n);
    case 2:
      return Expr::binary(Expr::Kind::add, random_expr(rng, n, depth - 1), random_expr(rng, n, depth - 1));
    case 3:
      return Expr::binary(Expr::Kind::sub, random_expr(rng, n, depth - 1), random_expr(rng, n, depth - 1));
    case 4:
      return Expr::binary(Expr::Kind::mul, random_expr(rng, n, depth - 1), random_expr(rng, n, depth - 1));
    case 5:
      return Expr::binary(Expr::Kind::div, random_expr(rng, n, depth - 1), positive(random_expr(rng, n, depth - 1)));
    case 6:
      return Expr::call(Expr::Function::sin, random_expr(rng, n, depth - 1));
    case 7:
      return Expr::call(Expr::Function::cos, random_expr(rng, n, depth - 1));
    case 8:
      return Expr::call(Expr::Function::log, positive(random_expr(rng, n, depth - 1)));
    default:
      return Expr::call(Expr::Function::sqrt, positive(random_expr(rng, n, depth - 1)));
  }
}

inline Vec<double> unit_vec(int i, int n) {
  Vec<double> e(n, 0.0);
  e[i] = 1.0;
  return e;
}

}  // namespace genverify::testing
