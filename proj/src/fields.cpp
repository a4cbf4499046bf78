#include "genverify/fields.hpp"

#include <cmath>

#include "genverify/errors.hpp"

namespace genverify {

Chart::Chart(std::vector<Interval> domain) : domain_(std::move(domain)) {
  if (domain_.empty() || static_cast<int>(domain_.size()) > kMaxDim) throw UsageError("chart dimension out of range");
  for (const Interval& iv : domain_) {
    if (!(iv.lo < iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
      throw UsageError("chart interval must be finite with lo < hi");
    }
  }
}

bool Chart::contains(std::span<const double> x) const {
  if (x.size() != domain_.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > domain_[i].lo && x[i] < domain_[i].hi)) return false;
  }
  return true;
}

PointSampler::PointSampler(const Chart& chart, std::uint64_t seed) : chart_(chart), rng_(seed) {}

double PointSampler::unit() {
  // 53 random bits, offset by half a step so neither endpoint can occur.
  const std::uint64_t bits = rng_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

Point PointSampler::next() {
  Point x(chart_.dim());
  for (int i = 0; i < chart_.dim(); ++i) {
    const Interval& iv = chart_.domain()[i];
    double v = iv.lo + (iv.hi - iv.lo) * unit();
    if (!(v > iv.lo)) v = std::nextafter(iv.lo, iv.hi);
    if (!(v < iv.hi)) v = std::nextafter(iv.hi, iv.lo);
    x[i] = v;
  }
  return x;
}

std::vector<Point> PointSampler::take(int count) {
  std::vector<Point> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) pts.push_back(next());
  return pts;
}

int FieldSpec::size() const {
  int s = 1;
  for (int i = 0; i < contra + co; ++i) s *= n;
  return s;
}

FieldSpec FieldSpec::from_strings(int n, int contra, int co, const std::vector<std::string>& src) {
  FieldSpec f;
  f.n = n;
  f.contra = contra;
  f.co = co;
  if (static_cast<int>(src.size()) != f.size()) throw UsageError("wrong number of field components");
  for (const std::string& s : src) f.components.push_back(Expr::parse(s, n));
  return f;
}

std::vector<Jet> eval_field(const FieldSpec& f, std::span<const double> x) {
  if (static_cast<int>(x.size()) != f.n) throw UsageError("point dimension does not match field");
  if (static_cast<int>(f.components.size()) != f.size()) throw UsageError("field has wrong number of components");
  std::vector<Jet> env;
  env.reserve(f.n);
  for (int i = 0; i < f.n; ++i) env.push_back(seed(i, x[i], f.n));
  std::vector<Jet> out;
  out.reserve(f.components.size());
  for (const Expr& e : f.components) out.push_back(e.eval(std::span<const Jet>(env)));
  return out;
}

JetMatrix eval_matrix_field(const FieldSpec& f, std::span<const double> x) {
  if (f.contra + f.co != 2) throw UsageError("matrix field must have two indices");
  const std::vector<Jet> c = eval_field(f, x);
  JetMatrix m(f.n, f.n);
  for (int i = 0; i < f.n; ++i)
    for (int j = 0; j < f.n; ++j) m(i, j) = c[i * f.n + j];
  return m;
}

std::string to_string(SymmetryKind k) {
  switch (k) {
    case SymmetryKind::symmetric:
      return "symmetric";
    case SymmetryKind::skew:
      return "skew";
    case SymmetryKind::general:
      return "general";
  }
  return "general";
}

SymmetryKind symmetry_kind_from_string(const std::string& s) {
  if (s == "symmetric") return SymmetryKind::symmetric;
  if (s == "skew") return SymmetryKind::skew;
  if (s == "general") return SymmetryKind::general;
  throw UsageError("unknown symmetry kind '" + s + "'");
}

MetricAt make_metric(const JetMatrix& h, SymmetryKind kind, const Point& x, double sym_tol) {
  const int n = h.rows();
  if (h.cols() != n) throw UsageError("metric must be square");
  if (kind != SymmetryKind::general) {
    const double sign = kind == SymmetryKind::symmetric ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const double a = h(i, j).value(), b = h(j, i).value();
        const double scale = 1.0 + std::max(std::abs(a), std::abs(b));
        if (std::abs(a - sign * b) > sym_tol * scale) {
          throw ValidationError("metric is not " + to_string(kind) + " at " + format_point(x));
        }
      }
    }
  }
  MetricAt m;
  m.x = x;
  m.kind = kind;
  m.h = h;
  m.h_inv = inverse(h, &m.rcond, x);
  return m;
}

MetricAt metric_at(const FieldSpec& h, SymmetryKind kind, std::span<const double> x) {
  if (h.contra != 0 || h.co != 2) throw UsageError("metric must be a (0,2) field");
  return make_metric(eval_matrix_field(h, x), kind, Point(x.begin(), x.end()));
}

Inverted invert(const Matrix<double>& a, const Point& at) {
  Inverted r;
  r.inv = inverse(a, &r.rcond, at);
  return r;
}

JetVector row(const JetMatrix& m, int r) {
  JetVector v(m.cols());
  for (int j = 0; j < m.cols(); ++j) v[j] = m(r, j);
  return v;
}

JetVector constant_vector(const Vec<double>& v, int n) {
  JetVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    r[i] = Jet(v[i]);
    r[i].set_dim(n);
  }
  return r;
}

}  // namespace genverify
