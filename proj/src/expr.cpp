#include "genverify/expr.hpp"

#include <charconv>
#include <cmath>
#include <cctype>
#include <limits>

#include "genverify/errors.hpp"

namespace genverify {

struct Expr::Node {
  Kind kind = Kind::number;
  double num = 0.0;
  int var = 0;
  Function fn = Function::exp;
  std::vector<Expr> kids;
};

namespace {

constexpr const char* kFunctionNames[] = {"exp", "log", "sin", "cos", "sqrt"};

class Parser {
 public:
  Parser(std::string_view src, int n) : src_(src), n_(n) {}

  Expr run() {
    Expr e = sum();
    skip_space();
    if (pos_ != src_.size()) fail("unexpected input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr sum() {
    Expr e = product();
    for (;;) {
      if (accept('+')) {
        e = Expr::binary(Expr::Kind::add, e, product());
      } else if (accept('-')) {
        e = Expr::binary(Expr::Kind::sub, e, product());
      } else {
        return e;
      }
    }
  }

  Expr product() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e = Expr::binary(Expr::Kind::mul, e, unary());
      } else if (accept('/')) {
        e = Expr::binary(Expr::Kind::div, e, unary());
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return Expr::negate(unary());
    return power();
  }

  Expr power() {
    Expr base = primary();
    skip_space();
    if (!accept('^')) return base;
    const std::size_t at = pos_;
    Expr exponent = unary();
    double p = 0.0;
    if (exponent.kind() == Expr::Kind::number) {
      p = exponent.number();
    } else if (exponent.kind() == Expr::Kind::negate && exponent.lhs().kind() == Expr::Kind::number) {
      p = -exponent.lhs().number();
    } else {
      throw ParseError("exponent must be a numeric literal", at);
    }
    return Expr::power(base, p);
  }

  Expr primary() {
    skip_space();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = sum();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return literal();
    if (std::isalpha(static_cast<unsigned char>(c))) return name();
    fail(std::string("unexpected character '") + c + "'");
  }

  Expr literal() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) ++q;
      if (q < src_.size() && std::isdigit(static_cast<unsigned char>(src_[q]))) {
        pos_ = q;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    const char* first = src_.data() + start;
    const char* last = src_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw ParseError("malformed number", start);
    return Expr::number(v, n_);
  }

  Expr name() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::string_view id = src_.substr(start, pos_ - start);
    for (int f = 0; f < 5; ++f) {
      if (id == kFunctionNames[f]) {
        if (!accept('(')) fail("expected '(' after function name");
        Expr arg = sum();
        if (!accept(')')) fail("expected ')'");
        return Expr::call(static_cast<Expr::Function>(f), arg);
      }
    }
    if (id.size() >= 2 && id[0] == 'x') {
      int index = 0;
      auto [ptr, ec] = std::from_chars(id.data() + 1, id.data() + id.size(), index);
      if (ec == std::errc() && ptr == id.data() + id.size() && id[1] != '0') {
        if (index < 1 || index > n_) throw ParseError("variable out of range", start);
        return Expr::variable(index - 1, n_);
      }
    }
    throw ParseError("unknown identifier '" + std::string(id) + "'", start);
  }

  std::string_view src_;
  int n_;
  std::size_t pos_ = 0;
};

int precedence(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::add:
    case Expr::Kind::sub:
      return 1;
    case Expr::Kind::mul:
    case Expr::Kind::div:
      return 2;
    case Expr::Kind::negate:
      return 3;
    case Expr::Kind::pow:
      return 4;
    default:
      return 5;
  }
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void print(const Expr& e, std::string& out);

void print_child(const Expr& e, int min_prec, std::string& out) {
  if (precedence(e) < min_prec) {
    out += '(';
    print(e, out);
    out += ')';
  } else {
    print(e, out);
  }
}

void print(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case Expr::Kind::number:
      out += format_number(e.number());
      return;
    case Expr::Kind::variable:
      out += 'x';
      out += std::to_string(e.variable() + 1);
      return;
    case Expr::Kind::negate:
      out += '-';
      print_child(e.lhs(), 3, out);
      return;
    case Expr::Kind::add:
    case Expr::Kind::sub:
      print_child(e.lhs(), 1, out);
      out += e.kind() == Expr::Kind::add ? " + " : " - ";
      print_child(e.rhs(), 2, out);
      return;
    case Expr::Kind::mul:
    case Expr::Kind::div:
      print_child(e.lhs(), 2, out);
      out += e.kind() == Expr::Kind::mul ? "*" : "/";
      print_child(e.rhs(), 3, out);
      return;
    case Expr::Kind::pow:
      print_child(e.lhs(), 5, out);
      out += '^';
      if (e.number() < 0) {
        out += '-';
        out += format_number(-e.number());
      } else {
        out += format_number(e.number());
      }
      return;
    case Expr::Kind::call:
      out += function_name(e.function());
      out += '(';
      print(e.lhs(), out);
      out += ')';
      return;
  }
}

double apply(Expr::Function f, double a) {
  switch (f) {
    case Expr::Function::exp:
      return std::exp(a);
    case Expr::Function::log:
      if (!(a > 0.0)) throw EvaluationError("log of non-positive value", {});
      return std::log(a);
    case Expr::Function::sin:
      return std::sin(a);
    case Expr::Function::cos:
      return std::cos(a);
    case Expr::Function::sqrt:
      if (!(a > 0.0)) throw EvaluationError("sqrt of non-positive value", {});
      return std::sqrt(a);
  }
  return 0.0;
}

Jet apply(Expr::Function f, const Jet& a) {
  switch (f) {
    case Expr::Function::exp:
      return exp(a);
    case Expr::Function::log:
      return log(a);
    case Expr::Function::sin:
      return sin(a);
    case Expr::Function::cos:
      return cos(a);
    case Expr::Function::sqrt:
      return sqrt(a);
  }
  return {};
}

double divide(double a, double b) {
  if (!(std::abs(b) > std::numeric_limits<double>::min())) throw EvaluationError("division by zero", {});
  return a / b;
}

Jet divide(const Jet& a, const Jet& b) { return a / b; }

double raise(double a, double p) {
  if (std::floor(p) == p && std::abs(p) < 64.0) {
    if (p < 0 && a == 0.0) throw EvaluationError("negative power of zero", {});
    return std::pow(a, p);
  }
  if (!(a > 0.0)) throw EvaluationError("non-integer power of non-positive value", {});
  return std::pow(a, p);
}

Jet raise(const Jet& a, double p) { return pow(a, p); }

template <class T>
T evaluate(const Expr& e, std::span<const T> x) {
  switch (e.kind()) {
    case Expr::Kind::number:
      return T(e.number());
    case Expr::Kind::variable:
      return x[e.variable()];
    case Expr::Kind::negate:
      return -evaluate(e.lhs(), x);
    case Expr::Kind::add:
      return evaluate(e.lhs(), x) + evaluate(e.rhs(), x);
    case Expr::Kind::sub:
      return evaluate(e.lhs(), x) - evaluate(e.rhs(), x);
    case Expr::Kind::mul:
      return evaluate(e.lhs(), x) * evaluate(e.rhs(), x);
    case Expr::Kind::div:
      return divide(evaluate(e.lhs(), x), evaluate(e.rhs(), x));
    case Expr::Kind::pow:
      return raise(evaluate(e.lhs(), x), e.number());
    case Expr::Kind::call:
      return apply(e.function(), evaluate(e.lhs(), x));
  }
  return T(0.0);
}

}  // namespace

std::string function_name(Expr::Function f) { return kFunctionNames[static_cast<int>(f)]; }

Expr Expr::parse(std::string_view src, int n) {
  if (n < 1 || n > kMaxDim) throw UsageError("expression dimension out of range");
  return Parser(src, n).run();
}

Expr parse_expr(std::string_view src, int n) { return Expr::parse(src, n); }

Expr Expr::number(double v, int n) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw UsageError("literal must be finite and non-negative");
  auto node = std::make_shared<Node>();
  node->kind = Kind::number;
  node->num = v;
  return Expr(node, n);
}

Expr Expr::variable(int index, int n) {
  if (index < 0 || index >= n) throw UsageError("variable index out of range");
  auto node = std::make_shared<Node>();
  node->kind = Kind::variable;
  node->var = index;
  return Expr(node, n);
}

Expr Expr::negate(const Expr& a) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::negate;
  node->kids = {a};
  return Expr(node, a.n_);
}

Expr Expr::binary(Kind kind, const Expr& a, const Expr& b) {
  if (kind != Kind::add && kind != Kind::sub && kind != Kind::mul && kind != Kind::div) {
    throw UsageError("not a binary operator");
  }
  if (a.n_ != b.n_) throw UsageError("expressions of different dimension combined");
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->kids = {a, b};
  return Expr(node, a.n_);
}

Expr Expr::power(const Expr& base, double exponent) {
  if (!std::isfinite(exponent)) throw UsageError("exponent must be finite");
  auto node = std::make_shared<Node>();
  node->kind = Kind::pow;
  node->num = exponent;
  node->kids = {base};
  return Expr(node, base.n_);
}

Expr Expr::call(Function f, const Expr& a) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::call;
  node->fn = f;
  node->kids = {a};
  return Expr(node, a.n_);
}

const Expr::Node& Expr::node() const {
  if (!node_) throw UsageError("empty expression");
  return *node_;
}

Expr::Kind Expr::kind() const { return node().kind; }
double Expr::number() const { return node().num; }
int Expr::variable() const { return node().var; }
Expr::Function Expr::function() const { return node().fn; }

const Expr& Expr::lhs() const {
  if (node().kids.empty()) throw UsageError("leaf expression has no children");
  return node().kids[0];
}

const Expr& Expr::rhs() const {
  if (node().kids.size() < 2) throw UsageError("expression has no right child");
  return node().kids[1];
}

double Expr::eval(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_) throw UsageError("environment size does not match expression dimension");
  try {
    return evaluate<double>(*this, x);
  } catch (const EvaluationError& err) {
    if (!err.point().empty()) throw;
    throw EvaluationError(err.what(), std::vector<double>(x.begin(), x.end()));
  }
}

Jet Expr::eval(std::span<const Jet> x) const {
  if (static_cast<int>(x.size()) != n_) throw UsageError("environment size does not match expression dimension");
  try {
    return evaluate<Jet>(*this, x);
  } catch (const EvaluationError& err) {
    if (!err.point().empty()) throw;
    std::vector<double> at;
    for (const Jet& j : x) at.push_back(j.value());
    throw EvaluationError(err.what(), at);
  }
}

Jet Expr::eval_jet(std::span<const double> x) const {
  std::vector<Jet> env;
  env.reserve(x.size());
  for (int i = 0; i < static_cast<int>(x.size()); ++i) env.push_back(seed(i, x[i], n_));
  return eval(std::span<const Jet>(env));
}

std::string Expr::to_string() const {
  std::string out;
  print(*this, out);
  return out;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.n_ != b.n_) return false;
  const Expr::Node& x = a.node();
  const Expr::Node& y = b.node();
  if (x.kind != y.kind || x.kids.size() != y.kids.size()) return false;
  switch (x.kind) {
    case Expr::Kind::number:
    case Expr::Kind::pow:
      if (x.num != y.num) return false;
      break;
    case Expr::Kind::variable:
      if (x.var != y.var) return false;
      break;
    case Expr::Kind::call:
      if (x.fn != y.fn) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < x.kids.size(); ++i) {
    if (!(x.kids[i] == y.kids[i])) return false;
  }
  return true;
}

}  // namespace genverify
