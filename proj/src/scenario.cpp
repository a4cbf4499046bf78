#include "genverify/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "genverify/errors.hpp"

namespace genverify {

using nlohmann::json;

namespace {

std::string number_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Reduces a ParseError message to the part before " at offset N".
std::string strip_offset(const ParseError& e) {
  std::string w = e.what();
  const std::string tail = " at offset " + std::to_string(e.offset());
  if (w.size() >= tail.size() && w.compare(w.size() - tail.size(), tail.size(), tail) == 0) {
    w.resize(w.size() - tail.size());
  }
  return w;
}

std::string expr_text(const json& v, const std::string& path) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return number_text(v.get<double>());
  throw ConfigError(path + ": expected an expression string or a number");
}

Expr parse_at(const std::string& src, int n, const std::string& path) {
  try {
    return parse_expr(src, n);
  } catch (const ParseError& e) {
    throw ParseError(path + " \"" + src + "\": " + strip_offset(e), e.offset());
  }
}

const json& require(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path + ": missing field '" + key + "'");
  return *it;
}

double number_at(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path + ": expected a number");
  return v.get<double>();
}

// n x n matrix of expressions, row-major.
FieldSpec matrix_field(const json& m, int n, int contra, const std::string& path) {
  if (!m.is_array() || static_cast<int>(m.size()) != n) {
    throw ConfigError(path + ": expected " + std::to_string(n) + " rows");
  }
  FieldSpec f;
  f.n = n;
  f.contra = contra;
  f.co = 2 - contra;
  for (int i = 0; i < n; ++i) {
    const json& row = m[i];
    const std::string rp = path + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      throw ConfigError(rp + ": expected " + std::to_string(n) + " entries");
    }
    for (int j = 0; j < n; ++j) {
      const std::string ep = rp + "[" + std::to_string(j) + "]";
      f.components.push_back(parse_at(expr_text(row[j], ep), n, ep));
    }
  }
  return f;
}

// Gamma^k_ij nested as [k][i][j].
FieldSpec connection_field(const json& c, int n, const std::string& path) {
  if (!c.is_array() || static_cast<int>(c.size()) != n) {
    throw ConfigError(path + ": expected " + std::to_string(n) + " blocks");
  }
  FieldSpec f;
  f.n = n;
  f.contra = 1;
  f.co = 2;
  for (int k = 0; k < n; ++k) {
    const FieldSpec block = matrix_field(c[k], n, 0, path + "[" + std::to_string(k) + "]");
    f.components.insert(f.components.end(), block.components.begin(), block.components.end());
  }
  return f;
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key())) throw ConfigError(path + ": unknown field '" + it.key() + "'");
  }
}

std::optional<bool> flag_at(const json& flags, const char* key) {
  auto it = flags.find(key);
  if (it == flags.end()) return std::nullopt;
  if (!it->is_boolean()) throw ConfigError(std::string("flags.") + key + ": expected true or false");
  return it->get<bool>();
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string to_string(ConnectionRecipe r) {
  switch (r) {
    case ConnectionRecipe::zero:
      return "zero";
    case ConnectionRecipe::levi_civita:
      return "levi_civita";
    case ConnectionRecipe::explicit_coefficients:
      return "entries";
  }
  return "zero";
}

std::vector<double> default_alphas() { return {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0}; }

Scenario parse_manifest(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("manifest is not valid JSON: ") + e.what(), e.byte);
  }
  if (!doc.is_object()) throw ConfigError("manifest must be a JSON object");
  reject_unknown(doc,
                 {"name", "description", "dim", "domain", "metric", "g", "connection", "J", "p", "q", "flags",
                  "expected_scalar", "checks", "alphas", "points", "seed", "tol", "tolerances"},
                 "manifest");

  Scenario s;
  const json& name = require(doc, "name", "manifest");
  if (!name.is_string() || name.get<std::string>().empty()) throw ConfigError("name: expected a non-empty string");
  s.name = name.get<std::string>();
  if (doc.contains("description")) s.description = doc["description"].get<std::string>();

  const json& dim = require(doc, "dim", "manifest");
  if (!dim.is_number_integer() || dim.get<int>() < 1 || dim.get<int>() > kMaxDim) {
    throw ConfigError("dim: expected an integer in 1.." + std::to_string(kMaxDim));
  }
  s.dim = dim.get<int>();
  const int n = s.dim;

  const json& domain = require(doc, "domain", "manifest");
  if (!domain.is_array() || static_cast<int>(domain.size()) != n) {
    throw ConfigError("domain: expected " + std::to_string(n) + " intervals");
  }
  for (int i = 0; i < n; ++i) {
    const std::string p = "domain[" + std::to_string(i) + "]";
    const json& iv = domain[i];
    if (!iv.is_array() || iv.size() != 2) throw ConfigError(p + ": expected [lo, hi]");
    Interval in{number_at(iv[0], p), number_at(iv[1], p)};
    if (!(in.lo < in.hi) || !std::isfinite(in.lo) || !std::isfinite(in.hi)) {
      throw ConfigError(p + ": need finite lo < hi");
    }
    s.domain.push_back(in);
  }

  const bool has_metric = doc.contains("metric"), has_g = doc.contains("g");
  if (has_metric == has_g) throw ConfigError("manifest: give exactly one of 'metric' and 'g'");
  if (has_metric) {
    const json& m = doc["metric"];
    if (!m.is_object()) throw ConfigError("metric: expected an object");
    reject_unknown(m, {"kind", "entries"}, "metric");
    const json& kind = require(m, "kind", "metric");
    if (!kind.is_string()) throw ConfigError("metric.kind: expected a string");
    const std::string k = kind.get<std::string>();
    if (k == "symmetric") {
      s.h_kind = SymmetryKind::symmetric;
    } else if (k == "skew") {
      s.h_kind = SymmetryKind::skew;
    } else {
      throw ConfigError("metric.kind: expected symmetric or skew, got '" + k + "'");
    }
    s.h = matrix_field(require(m, "entries", "metric"), n, 0, "metric.entries");
  } else {
    s.h_kind = SymmetryKind::symmetric;
    s.h = matrix_field(doc["g"], n, 0, "g");
    s.connection = ConnectionRecipe::levi_civita;
  }

  if (doc.contains("connection")) {
    const json& c = doc["connection"];
    if (c.is_string()) {
      const std::string r = c.get<std::string>();
      if (r == "zero") {
        s.connection = ConnectionRecipe::zero;
      } else if (r == "levi_civita") {
        s.connection = ConnectionRecipe::levi_civita;
      } else {
        throw ConfigError("connection: expected zero, levi_civita or {entries}, got '" + r + "'");
      }
    } else if (c.is_object()) {
      reject_unknown(c, {"entries"}, "connection");
      s.connection = ConnectionRecipe::explicit_coefficients;
      s.gamma = connection_field(require(c, "entries", "connection"), n, "connection.entries");
    } else {
      throw ConfigError("connection: expected a string or an object");
    }
    if (has_g && s.connection != ConnectionRecipe::levi_civita) {
      throw ConfigError("connection: 'g' manifests use the Levi-Civita connection");
    }
  }
  if (s.connection == ConnectionRecipe::levi_civita && s.h_kind != SymmetryKind::symmetric) {
    throw ConfigError("connection: Levi-Civita needs a symmetric metric");
  }

  if (doc.contains("J")) {
    const json& J = doc["J"];
    if (!J.is_object()) throw ConfigError("J: expected an object");
    reject_unknown(J, {"entries"}, "J");
    s.J = matrix_field(require(J, "entries", "J"), n, 1, "J.entries");
  }
  if (doc.contains("p")) s.p = number_at(doc["p"], "p");
  if (doc.contains("q")) s.q = number_at(doc["q"], "q");

  if (doc.contains("flags")) {
    const json& f = doc["flags"];
    if (!f.is_object()) throw ConfigError("flags: expected an object");
    reject_unknown(f, {"expect_statistical", "expect_parallel_h", "expect_dJ_zero"}, "flags");
    s.flags.statistical = flag_at(f, "expect_statistical");
    s.flags.parallel_h = flag_at(f, "expect_parallel_h");
    s.flags.dJ_zero = flag_at(f, "expect_dJ_zero");
    if (s.flags.dJ_zero && !s.J) throw ConfigError("flags.expect_dJ_zero: scenario has no J");
  }
  if (doc.contains("expected_scalar")) s.expected_scalar = number_at(doc["expected_scalar"], "expected_scalar");

  if (doc.contains("checks")) {
    const json& c = doc["checks"];
    if (c.is_string()) {
      if (c.get<std::string>() != "all") throw ConfigError("checks: expected \"all\" or a list of check ids");
    } else if (c.is_array()) {
      for (const json& id : c) {
        if (!id.is_string()) throw ConfigError("checks: ids must be strings");
        s.checks.push_back(id.get<std::string>());
      }
    } else {
      throw ConfigError("checks: expected \"all\" or a list of check ids");
    }
  }

  s.alphas = default_alphas();
  if (doc.contains("alphas")) {
    const json& a = doc["alphas"];
    if (!a.is_array() || a.empty()) throw ConfigError("alphas: expected a non-empty list of numbers");
    s.alphas.clear();
    for (std::size_t i = 0; i < a.size(); ++i) s.alphas.push_back(number_at(a[i], "alphas"));
  }
  if (doc.contains("points")) {
    const json& p = doc["points"];
    if (!p.is_number_integer() || p.get<int>() < 1) throw ConfigError("points: expected a positive integer");
    s.points = p.get<int>();
  }
  if (doc.contains("seed")) {
    const json& sd = doc["seed"];
    if (!sd.is_number_integer() || sd.get<long long>() < 0) throw ConfigError("seed: expected a non-negative integer");
    s.seed = sd.get<std::uint64_t>();
  }
  if (doc.contains("tol")) {
    s.tol = number_at(doc["tol"], "tol");
    if (!(s.tol > 0.0)) throw ConfigError("tol: must be positive");
  }
  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    if (!t.is_object()) throw ConfigError("tolerances: expected an object of check id to tolerance");
    for (auto it = t.begin(); it != t.end(); ++it) {
      const double v = number_at(it.value(), "tolerances." + it.key());
      if (!(v > 0.0)) throw ConfigError("tolerances." + it.key() + ": must be positive");
      s.tolerances[it.key()] = v;
    }
  }

  // Catch kind mismatches and degenerate fields before any sampling.
  Point centre;
  for (const Interval& iv : s.domain) centre.push_back(0.5 * (iv.lo + iv.hi));
  try {
    evaluate(s, centre);
  } catch (const Error& e) {
    throw ConfigError("scenario '" + s.name + "' at the domain centre: " + e.what());
  }
  return s;
}

Scenario load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read manifest '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

PointData evaluate(const Scenario& s, const Point& x) {
  PointData d;
  d.x = x;
  d.h = make_metric(eval_matrix_field(s.h, x), s.h_kind, x, 1e-12);
  switch (s.connection) {
    case ConnectionRecipe::zero:
      d.nabla = zero_connection(s.dim);
      break;
    case ConnectionRecipe::levi_civita:
      d.nabla = levi_civita(d.h);
      break;
    case ConnectionRecipe::explicit_coefficients:
      d.nabla = explicit_connection(*s.gamma, x);
      break;
  }
  if (s.J) d.J = eval_matrix_field(*s.J, x);
  return d;
}

std::map<std::string, double> Profile::values() const {
  std::map<std::string, double> v{{"max_torsion", torsion}, {"max_d_nabla_h", d_nabla_h}, {"max_nabla_h", nabla_h}};
  if (has_J) {
    v["max_J_h_symmetry_defect"] = J_h_symmetry;
    v["min_abs_det_J"] = J_min_abs_det;
    v["max_nabla_J"] = nabla_J;
    v["max_d_nabla_J"] = d_nabla_J;
    v["max_nabla_J_h_symmetry_defect"] = nabla_J_h_symmetry;
    v["max_metallic_identity_defect"] = metallic_identity;
  }
  return v;
}

Profile startup_profile(const Scenario& s, const std::vector<Point>& points, double tol) {
  Profile pr;
  pr.tol = tol;
  pr.has_J = s.J.has_value();
  pr.J_min_abs_det = pr.has_J ? INFINITY : 0.0;
  const int n = s.dim;
  for (const Point& x : points) {
    PointData d;
    try {
      d = evaluate(s, x);
    } catch (const Error& e) {
      throw ConfigError("scenario '" + s.name + "': " + e.what());
    }
    const Tensor3d T = torsion(d.nabla);
    for (double v : T.data()) pr.torsion = std::max(pr.torsion, std::abs(v));
    const Tensor3d dnh = d_nabla_h(d.nabla, d.h), nh = nabla_h(d.nabla, d.h);
    for (double v : dnh.data()) pr.d_nabla_h = std::max(pr.d_nabla_h, std::abs(v));
    for (double v : nh.data()) pr.nabla_h = std::max(pr.nabla_h, std::abs(v));
    if (s.h_kind == SymmetryKind::symmetric) {
      try {
        orthonormal_frame(values(d.h.h), x);
      } catch (const FrameError&) {
        pr.positive_definite = false;
      }
    } else {
      pr.positive_definite = false;
    }
    if (!d.J) continue;
    const Matrix<double> Jv = values(*d.J), hv = values(d.h.h);
    pr.J_h_symmetry = std::max(pr.J_h_symmetry, max_abs(transpose(Jv) * hv - hv * Jv));
    pr.J_min_abs_det = std::min(pr.J_min_abs_det, std::abs(determinant(Jv)));
    const FConditions fc = F_conditions(d.h, d.nabla, *d.J);
    const Tensor3d dJ = nabla_J(d.nabla, *d.J);
    for (double v : dJ.data()) pr.nabla_J = std::max(pr.nabla_J, std::abs(v));
    for (double v : fc.dJ.data()) pr.d_nabla_J = std::max(pr.d_nabla_J, std::abs(v));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          pr.nabla_J_h_symmetry = std::max(pr.nabla_J_h_symmetry, std::abs(fc.F(i, j, k) - fc.F(i, k, j)));
    pr.metallic_identity = std::max(pr.metallic_identity, metallic_defect(*d.J, s.metallic_p(), s.metallic_q()));
  }

  auto mismatch = [&](const char* flag, bool declared, const std::string& measured) {
    throw ConfigError("scenario '" + s.name + "' declares " + flag + " = " + yes_no(declared) +
                      " but the sampled points give " + measured);
  };
  if (s.flags.statistical && *s.flags.statistical != pr.statistical()) {
    mismatch("expect_statistical", *s.flags.statistical,
             "max |T| = " + number_text(pr.torsion) + ", max |d^nabla h| = " + number_text(pr.d_nabla_h));
  }
  if (s.flags.parallel_h && *s.flags.parallel_h != pr.parallel_h()) {
    mismatch("expect_parallel_h", *s.flags.parallel_h, "max |nabla h| = " + number_text(pr.nabla_h));
  }
  if (s.flags.dJ_zero && *s.flags.dJ_zero != pr.dJ_zero()) {
    mismatch("expect_dJ_zero", *s.flags.dJ_zero, "max |d^nabla J| = " + number_text(pr.d_nabla_J));
  }
  return pr;
}

}  // namespace genverify
