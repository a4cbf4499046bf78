#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace genverify {

inline constexpr int kMaxDim = 8;

/// Second-order Taylor jet of a scalar in n variables.
///
/// Holds the value, gradient and Hessian at the seed point. The Hessian is
/// stored packed (upper triangle), so it is symmetric by construction. A jet of
/// dimension 0 is a plain constant and combines with jets of any dimension.
class Jet {
 public:
  Jet() = default;
  Jet(double value) : value_(value) {}  // NOLINT: constants promote implicitly

  static Jet variable(int index, double value, int n);

  int dim() const { return n_; }
  double value() const { return value_; }
  double grad(int i) const;
  double hess(int i, int j) const;
  std::vector<double> gradient() const;
  /// Value and every derivative are exactly zero.
  bool is_zero() const;

  // Raw setters used by derived constructions.
  void set_dim(int n);
  void set_value(double v) { value_ = v; }
  void set_grad(int i, double g);
  void set_hess(int i, int j, double h);

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);

  friend Jet operator+(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a, const Jet& b);
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a);

  // f(a) from f(v), f'(v), f''(v) by the chain rule.
  Jet compose(double f0, double f1, double f2) const;

  friend Jet partial(const Jet& f, int k);

 private:
  static constexpr int kPacked = kMaxDim * (kMaxDim + 1) / 2;
  static int packed(int i, int j) { return i <= j ? j * (j + 1) / 2 + i : i * (i + 1) / 2 + j; }
  static int common_dim(const Jet& a, const Jet& b);

  int n_ = 0;
  double value_ = 0.0;
  std::array<double, kMaxDim> grad_{};
  std::array<double, kPacked> hess_{};
};

Jet seed(int index, double value, int n);

Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet sqrt(const Jet& a);
Jet pow(const Jet& a, double p);

/// Partial derivative d/dx_k of a jet. The result is exact to first order; its
/// Hessian is unknown and set to NaN so that any quantity secretly needing a
/// third derivative shows up as non-finite.
Jet partial(const Jet& f, int k);

/// True when every Hessian entry is finite.
bool second_order_known(const Jet& f);

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value(); }

struct FdDerivatives {
  std::vector<double> grad;
  std::vector<std::vector<double>> hess;
};

/// Central differences: gradient with a 2-point stencil, Hessian with the
/// 4-point second-difference stencil (diagonal uses spacing 2*step).
FdDerivatives fd_oracle(const std::function<double(std::span<const double>)>& f,
                        std::span<const double> x, double step = 1e-4);

}  // namespace genverify
