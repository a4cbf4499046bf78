#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "genverify/base_geometry.hpp"

namespace genverify {

enum class ConnectionRecipe { zero, levi_civita, explicit_coefficients };

std::string to_string(ConnectionRecipe r);

/// Properties a scenario claims about itself. Unset flags are not checked.
struct DeclaredFlags {
  std::optional<bool> statistical;  // T = 0 and d^nabla h = 0
  std::optional<bool> parallel_h;   // nabla h = 0
  std::optional<bool> dJ_zero;      // d^nabla J = 0
};

/// A named bundle: chart, h, connection recipe, optional J, run settings.
struct Scenario {
  std::string name;
  std::string description;
  int dim = 0;
  std::vector<Interval> domain;
  SymmetryKind h_kind = SymmetryKind::symmetric;
  FieldSpec h;
  ConnectionRecipe connection = ConnectionRecipe::zero;
  std::optional<FieldSpec> gamma;
  std::optional<FieldSpec> J;
  std::optional<double> p;
  std::optional<double> q;
  DeclaredFlags flags;
  std::optional<double> expected_scalar;  // constant scalar curvature of (h, nabla)
  std::vector<std::string> checks;        // empty means every check
  std::vector<double> alphas;
  int points = 50;
  std::uint64_t seed = 42;
  double tol = 1e-8;
  std::map<std::string, double> tolerances;  // per-check overrides

  Chart chart() const { return Chart(domain); }
  double metallic_p() const { return p.value_or(1.0); }
  double metallic_q() const { return q.value_or(1.0); }
};

std::vector<double> default_alphas();

/// Parses a JSON manifest. Expression errors are rethrown as ParseError with
/// the field path and the offset inside the expression; structural problems
/// raise ConfigError.
Scenario parse_manifest(std::string_view text);
Scenario load_manifest(const std::string& path);

std::vector<Scenario> builtin_scenarios();
/// Throws ConfigError when no builtin has that name.
Scenario builtin_scenario(const std::string& name);
/// The embedded manifest text of a builtin.
std::string builtin_manifest(const std::string& name);

/// Geometry of a scenario at one point. J is absent when the scenario has none.
struct PointData {
  Point x;
  MetricAt h;
  Christoffel nabla;
  std::optional<JetMatrix> J;
};

PointData evaluate(const Scenario& s, const Point& x);

/// Worst-case values of the hypotheses checks depend on, over a point set.
/// Each entry is a max-abs value; a property holds when it is within tol.
struct Profile {
  double tol = 0.0;
  double torsion = 0.0;
  double d_nabla_h = 0.0;
  double nabla_h = 0.0;
  bool positive_definite = true;
  bool has_J = false;
  double J_h_symmetry = 0.0;
  double J_min_abs_det = 0.0;
  double nabla_J = 0.0;
  double d_nabla_J = 0.0;
  double nabla_J_h_symmetry = 0.0;  // max |F(X,Y,Z) - F(X,Z,Y)|
  double metallic_identity = 0.0;   // max |J^2 - pJ - qI|

  bool vanishes(double v) const { return v <= tol; }
  bool sym_or_skew(const Scenario& s) const { return s.h_kind != SymmetryKind::general; }
  bool quasi_statistical() const { return vanishes(d_nabla_h); }
  bool statistical() const { return vanishes(torsion) && vanishes(d_nabla_h); }
  bool parallel_h() const { return vanishes(nabla_h); }
  bool J_h_symmetric() const { return has_J && vanishes(J_h_symmetry); }
  bool J_invertible() const { return has_J && J_min_abs_det > 1e-10; }
  bool parallel_J() const { return has_J && vanishes(nabla_J); }
  bool dJ_zero() const { return has_J && vanishes(d_nabla_J); }
  bool nabla_J_h_symmetric() const { return has_J && vanishes(nabla_J_h_symmetry); }
  bool metallic() const { return has_J && vanishes(metallic_identity); }

  std::map<std::string, double> values() const;
};

/// Evaluates every point, builds the profile and compares it with the
/// declared flags. Any evaluation failure or flag mismatch is a ConfigError.
Profile startup_profile(const Scenario& s, const std::vector<Point>& points, double tol);

}  // namespace genverify
