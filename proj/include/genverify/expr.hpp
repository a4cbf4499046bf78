#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "genverify/jet.hpp"

namespace genverify {

/// Immutable expression tree over chart coordinates x1..xn.
///
/// Grammar, loosest binding first: `+ -`, then `* /`, then unary minus, then
/// `^` (right-associative, exponent must be a numeric literal). Primaries are
/// numbers, variables `x1`..`xn`, parenthesised expressions and the calls
/// exp, log, sin, cos, sqrt.
class Expr {
 public:
  enum class Kind { number, variable, negate, add, sub, mul, div, pow, call };
  enum class Function { exp, log, sin, cos, sqrt };

  static Expr parse(std::string_view src, int n);

  static Expr number(double v, int n);
  static Expr variable(int index, int n);
  static Expr negate(const Expr& a);
  static Expr binary(Kind kind, const Expr& a, const Expr& b);
  static Expr power(const Expr& base, double exponent);
  static Expr call(Function f, const Expr& a);

  int dim() const { return n_; }
  Kind kind() const;
  double number() const;   // literal value, or exponent for pow
  int variable() const;    // 0-based variable index
  Function function() const;
  const Expr& lhs() const;  // operand of unary nodes, left child otherwise
  const Expr& rhs() const;

  double eval(std::span<const double> x) const;
  Jet eval(std::span<const Jet> x) const;

  /// Convenience: evaluate with jets seeded at x.
  Jet eval_jet(std::span<const double> x) const;

  std::string to_string() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  Expr(std::shared_ptr<const Node> node, int n) : node_(std::move(node)), n_(n) {}
  const Node& node() const;

  std::shared_ptr<const Node> node_;
  int n_ = 0;
};

Expr parse_expr(std::string_view src, int n);

std::string function_name(Expr::Function f);

}  // namespace genverify
