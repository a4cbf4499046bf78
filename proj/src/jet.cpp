#include "genverify/jet.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "genverify/errors.hpp"

namespace genverify {

PointError::PointError(const std::string& what, std::vector<double> point)
    : Error(point.empty() ? what : what + " at " + format_point(point)), point_(std::move(point)) {}

std::string format_point(const std::vector<double>& x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << x[i];
  }
  os << ')';
  return os.str();
}

Jet Jet::variable(int index, double value, int n) {
  if (n < 1 || n > kMaxDim) throw UsageError("jet dimension out of range");
  if (index < 0 || index >= n) throw UsageError("jet seed index out of range");
  Jet j;
  j.n_ = n;
  j.value_ = value;
  j.grad_[index] = 1.0;
  return j;
}

Jet seed(int index, double value, int n) { return Jet::variable(index, value, n); }

double Jet::grad(int i) const {
  if (i < 0 || i >= kMaxDim) throw UsageError("gradient index out of range");
  return grad_[i];
}

double Jet::hess(int i, int j) const {
  if (i < 0 || j < 0 || i >= kMaxDim || j >= kMaxDim) throw UsageError("hessian index out of range");
  return hess_[packed(i, j)];
}

bool Jet::is_zero() const {
  if (value_ != 0.0) return false;
  for (int i = 0; i < n_; ++i)
    if (grad_[i] != 0.0) return false;
  const int m = n_ * (n_ + 1) / 2;
  for (int p = 0; p < m; ++p)
    if (hess_[p] != 0.0) return false;
  return true;
}

std::vector<double> Jet::gradient() const { return {grad_.begin(), grad_.begin() + n_}; }

void Jet::set_dim(int n) {
  if (n < 0 || n > kMaxDim) throw UsageError("jet dimension out of range");
  n_ = n;
}

void Jet::set_grad(int i, double g) {
  if (i < 0 || i >= n_) throw UsageError("gradient index out of range");
  grad_[i] = g;
}

void Jet::set_hess(int i, int j, double h) {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) throw UsageError("hessian index out of range");
  hess_[packed(i, j)] = h;
}

int Jet::common_dim(const Jet& a, const Jet& b) {
  if (a.n_ == b.n_ || b.n_ == 0) return a.n_;
  if (a.n_ == 0) return b.n_;
  throw UsageError("jets of different dimension combined");
}

Jet& Jet::operator+=(const Jet& o) {
  n_ = common_dim(*this, o);
  value_ += o.value_;
  for (int i = 0; i < n_; ++i) grad_[i] += o.grad_[i];
  const int m = n_ * (n_ + 1) / 2;
  for (int p = 0; p < m; ++p) hess_[p] += o.hess_[p];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  n_ = common_dim(*this, o);
  value_ -= o.value_;
  for (int i = 0; i < n_; ++i) grad_[i] -= o.grad_[i];
  const int m = n_ * (n_ + 1) / 2;
  for (int p = 0; p < m; ++p) hess_[p] -= o.hess_[p];
  return *this;
}

Jet& Jet::operator*=(const Jet& o) {
  *this = *this * o;
  return *this;
}

Jet& Jet::operator/=(const Jet& o) {
  *this = *this / o;
  return *this;
}

Jet operator+(const Jet& a, const Jet& b) {
  Jet r = a;
  r += b;
  return r;
}

Jet operator-(const Jet& a, const Jet& b) {
  Jet r = a;
  r -= b;
  return r;
}

Jet operator-(const Jet& a) {
  Jet r = a;
  r.value_ = -r.value_;
  for (int i = 0; i < r.n_; ++i) r.grad_[i] = -r.grad_[i];
  const int m = r.n_ * (r.n_ + 1) / 2;
  for (int p = 0; p < m; ++p) r.hess_[p] = -r.hess_[p];
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet r;
  r.n_ = Jet::common_dim(a, b);
  const int n = r.n_;
  r.value_ = a.value_ * b.value_;
  for (int i = 0; i < n; ++i) r.grad_[i] = a.value_ * b.grad_[i] + b.value_ * a.grad_[i];
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= j; ++i) {
      const int p = Jet::packed(i, j);
      r.hess_[p] = a.value_ * b.hess_[p] + b.value_ * a.hess_[p] + a.grad_[i] * b.grad_[j] +
                   a.grad_[j] * b.grad_[i];
    }
  }
  return r;
}

Jet operator/(const Jet& a, const Jet& b) {
  const double v = b.value_;
  if (!(std::abs(v) > std::numeric_limits<double>::min())) {
    throw EvaluationError("division by zero", {});
  }
  return a * b.compose(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
}

Jet Jet::compose(double f0, double f1, double f2) const {
  Jet r;
  r.n_ = n_;
  r.value_ = f0;
  for (int i = 0; i < n_; ++i) r.grad_[i] = f1 * grad_[i];
  for (int j = 0; j < n_; ++j) {
    for (int i = 0; i <= j; ++i) {
      const int p = packed(i, j);
      r.hess_[p] = f1 * hess_[p] + f2 * grad_[i] * grad_[j];
    }
  }
  return r;
}

Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  return a.compose(e, e, e);
}

Jet log(const Jet& a) {
  const double v = a.value();
  if (!(v > 0.0)) throw EvaluationError("log of non-positive value", {});
  return a.compose(std::log(v), 1.0 / v, -1.0 / (v * v));
}

Jet sin(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose(s, c, -s);
}

Jet cos(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose(c, -s, -c);
}

Jet sqrt(const Jet& a) {
  const double v = a.value();
  if (!(v > 0.0)) throw EvaluationError("sqrt of non-positive value", {});
  const double s = std::sqrt(v);
  return a.compose(s, 0.5 / s, -0.25 / (s * v));
}

namespace {

// v^e for small integer e, by repeated multiplication so 0^0 == 1.
double int_power(double v, long e) {
  if (e < 0) return 1.0 / int_power(v, -e);
  double r = 1.0;
  for (long i = 0; i < e; ++i) r *= v;
  return r;
}

}  // namespace

Jet pow(const Jet& a, double p) {
  const double v = a.value();
  const bool integral = std::floor(p) == p && std::abs(p) < 64.0;
  if (integral) {
    const long e = static_cast<long>(p);
    if (e < 0 && v == 0.0) throw EvaluationError("negative power of zero", {});
    const double f0 = int_power(v, e);
    const double f1 = e == 0 ? 0.0 : static_cast<double>(e) * int_power(v, e - 1);
    const double f2 = (e == 0 || e == 1) ? 0.0 : static_cast<double>(e * (e - 1)) * int_power(v, e - 2);
    return a.compose(f0, f1, f2);
  }
  if (!(v > 0.0)) throw EvaluationError("non-integer power of non-positive value", {});
  const double f0 = std::pow(v, p);
  return a.compose(f0, p * f0 / v, p * (p - 1.0) * f0 / (v * v));
}

Jet partial(const Jet& f, int k) {
  if (f.n_ == 0 && k >= 0 && k < kMaxDim) return Jet(0.0);  // constants differentiate exactly
  if (k < 0 || k >= f.n_) throw UsageError("partial derivative index out of range");
  Jet r;
  r.n_ = f.n_;
  r.value_ = f.grad_[k];
  for (int i = 0; i < f.n_; ++i) r.grad_[i] = f.hess_[Jet::packed(k, i)];
  r.hess_.fill(std::numeric_limits<double>::quiet_NaN());
  return r;
}

bool second_order_known(const Jet& f) {
  for (int i = 0; i < f.dim(); ++i) {
    for (int j = i; j < f.dim(); ++j) {
      if (!std::isfinite(f.hess(i, j))) return false;
    }
  }
  return true;
}

FdDerivatives fd_oracle(const std::function<double(std::span<const double>)>& f,
                        std::span<const double> x, double step) {
  const int n = static_cast<int>(x.size());
  FdDerivatives out;
  out.grad.assign(n, 0.0);
  out.hess.assign(n, std::vector<double>(n, 0.0));
  std::vector<double> y(x.begin(), x.end());
  auto at = [&](int i, double di, int j, double dj) {
    y.assign(x.begin(), x.end());
    if (i >= 0) y[i] += di;
    if (j >= 0) y[j] += dj;
    return f(y);
  };
  for (int i = 0; i < n; ++i) {
    out.grad[i] = (at(i, step, -1, 0.0) - at(i, -step, -1, 0.0)) / (2.0 * step);
  }
  const double denom = 4.0 * step * step;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double v = (at(i, step, j, step) - at(i, step, j, -step) - at(i, -step, j, step) +
                        at(i, -step, j, -step)) /
                       denom;
      out.hess[i][j] = v;
      out.hess[j][i] = v;
    }
  }
  return out;
}

}  // namespace genverify
