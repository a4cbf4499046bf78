#include <string>
#include <utility>
#include <vector>

#include "genverify/errors.hpp"
#include "genverify/scenario.hpp"

namespace genverify {

namespace {

// Builtins are manifests in the same format `genverify run --manifest` reads.
const std::vector<std::pair<std::string, std::string>>& manifests() {
  static const std::vector<std::pair<std::string, std::string>> list = {
      {"flat-euclid", R"json({
  "name": "flat-euclid",
  "description": "h = I, zero connection, constant golden J",
  "dim": 2,
  "domain": [[-1, 1], [-1, 1]],
  "metric": {"kind": "symmetric", "entries": [["1", "0"], ["0", "1"]]},
  "connection": "zero",
  "J": {"entries": [["1", "1"], ["1", "0"]]},
  "p": 1, "q": 1,
  "flags": {"expect_statistical": true, "expect_parallel_h": true, "expect_dJ_zero": true},
  "expected_scalar": 0
})json"},
      {"exp-diag", R"json({
  "name": "exp-diag",
  "description": "h = diag(exp(x1), 1), zero connection",
  "dim": 2,
  "domain": [[-1, 1], [-1, 1]],
  "metric": {"kind": "symmetric", "entries": [["exp(x1)", "0"], ["0", "1"]]},
  "connection": "zero",
  "flags": {"expect_statistical": true, "expect_parallel_h": false}
})json"},
      {"gauss-fisher", R"json({
  "name": "gauss-fisher",
  "description": "Fisher metric of the normal family in (mu, sigma), Levi-Civita",
  "dim": 2,
  "domain": [[-1, 1], [0.5, 3]],
  "g": [["1/x2^2", "0"], ["0", "2/x2^2"]],
  "flags": {"expect_statistical": true, "expect_parallel_h": true},
  "expected_scalar": -1
})json"},
      {"sphere", R"json({
  "name": "sphere",
  "description": "round unit sphere in polar chart, Levi-Civita",
  "dim": 2,
  "domain": [[0.3, 2.8], [-1, 1]],
  "g": [["1", "0"], ["0", "sin(x1)^2"]],
  "flags": {"expect_statistical": true, "expect_parallel_h": true},
  "expected_scalar": 2
})json"},
      {"twin-diag", R"json({
  "name": "twin-diag",
  "description": "g = I, Levi-Civita, J = diag(2 + sin x1, 1)",
  "dim": 2,
  "domain": [[-1, 1], [-1, 1]],
  "g": [["1", "0"], ["0", "1"]],
  "J": {"entries": [["2 + sin(x1)", "0"], ["0", "1"]]},
  "flags": {"expect_statistical": true, "expect_parallel_h": true, "expect_dJ_zero": true}
})json"},
      {"skew", R"json({
  "name": "skew",
  "description": "constant skew h, zero connection",
  "dim": 2,
  "domain": [[-1, 1], [-1, 1]],
  "metric": {"kind": "skew", "entries": [["0", "1"], ["-1", "0"]]},
  "connection": "zero",
  "flags": {"expect_statistical": true, "expect_parallel_h": true}
})json"},
      {"noncommuting-F", R"json({
  "name": "noncommuting-F",
  "description": "h = I, zero connection, J = [[1 + x2^2, x1 x2], [x1 x2, 1]]",
  "dim": 2,
  "domain": [[-1, 1], [-1, 1]],
  "metric": {"kind": "symmetric", "entries": [["1", "0"], ["0", "1"]]},
  "connection": "zero",
  "J": {"entries": [["1 + x2^2", "x1*x2"], ["x1*x2", "1"]]},
  "flags": {"expect_statistical": true, "expect_parallel_h": true, "expect_dJ_zero": false}
})json"},
      {"hessian-flat", R"json({
  "name": "hessian-flat",
  "description": "Hessian metric of exp(x1 + x2) + x1^2 + x2^2 with the flat connection",
  "dim": 2,
  "domain": [[-1, 1], [-1, 1]],
  "metric": {"kind": "symmetric",
             "entries": [["exp(x1 + x2) + 2", "exp(x1 + x2)"], ["exp(x1 + x2)", "exp(x1 + x2) + 2"]]},
  "connection": "zero",
  "flags": {"expect_statistical": true, "expect_parallel_h": false}
})json"},
      {"cubic-curved", R"json({
  "name": "cubic-curved",
  "description": "h = I with Gamma^1_11 = -x2/2: statistical, curved, nabla h != 0",
  "dim": 2,
  "domain": [[-1, 1], [-1, 1]],
  "metric": {"kind": "symmetric", "entries": [["1", "0"], ["0", "1"]]},
  "connection": {"entries": [[["-x2/2", "0"], ["0", "0"]], [["0", "0"], ["0", "0"]]]},
  "flags": {"expect_statistical": true, "expect_parallel_h": false}
})json"},
      {"exp-diag-twisted", R"json({
  "name": "exp-diag-twisted",
  "description": "h = diag(exp(x1), 1), zero connection, diagonal J with nabla J h-symmetric",
  "dim": 2,
  "domain": [[-1, 1], [-1, 1]],
  "metric": {"kind": "symmetric", "entries": [["exp(x1)", "0"], ["0", "1"]]},
  "connection": "zero",
  "J": {"entries": [["2 + sin(x1)", "0"], ["0", "1 + x2^2"]]},
  "flags": {"expect_statistical": true, "expect_parallel_h": false}
})json"},
      {"exp-diag-shear", R"json({
  "name": "exp-diag-shear",
  "description": "h = diag(exp(x1), 1), zero connection, h-symmetric J with C1 != 0",
  "dim": 2,
  "domain": [[-1, 1], [-1, 1]],
  "metric": {"kind": "symmetric", "entries": [["exp(x1)", "0"], ["0", "1"]]},
  "connection": "zero",
  "J": {"entries": [["x2", "1"], ["exp(x1)", "0"]]},
  "flags": {"expect_statistical": true, "expect_parallel_h": false}
})json"},
      {"twin-perturbed", R"json({
  "name": "twin-perturbed",
  "description": "g = I, Levi-Civita, J = [[2 + sin x1, x1/2], [x1/2, 1]] with d^nabla J != 0",
  "dim": 2,
  "domain": [[-1, 1], [-1, 1]],
  "g": [["1", "0"], ["0", "1"]],
  "J": {"entries": [["2 + sin(x1)", "0.5*x1"], ["0.5*x1", "1"]]},
  "flags": {"expect_statistical": true, "expect_parallel_h": true, "expect_dJ_zero": false}
})json"},
      {"golden-wave", R"json({
  "name": "golden-wave",
  "description": "g = I, Levi-Civita, non-constant golden J = [[t, b], [b, 1 - t]], t = sin(x1)/2, b = sqrt(1 + t - t^2)",
  "dim": 2,
  "domain": [[-1, 1], [-1, 1]],
  "g": [["1", "0"], ["0", "1"]],
  "J": {"entries": [["0.5*sin(x1)", "sqrt(1 + 0.5*sin(x1) - 0.25*sin(x1)^2)"],
                    ["sqrt(1 + 0.5*sin(x1) - 0.25*sin(x1)^2)", "1 - 0.5*sin(x1)"]]},
  "p": 1, "q": 1,
  "flags": {"expect_statistical": true, "expect_parallel_h": true, "expect_dJ_zero": false}
})json"},
      {"torsion-generic", R"json({
  "name": "torsion-generic",
  "description": "non-constant symmetric h with a connection that has torsion and nabla h != 0",
  "dim": 2,
  "domain": [[-1, 1], [-1, 1]],
  "metric": {"kind": "symmetric", "entries": [["2 + sin(x2)", "0.3*x1"], ["0.3*x1", "1 + x1^2"]]},
  "connection": {"entries": [[["x2", "0.2*x1"], ["0", "x1*x2"]], [["0.5", "0"], ["x1^2", "sin(x2)"]]]},
  "flags": {"expect_statistical": false, "expect_parallel_h": false}
})json"},
      {"hyperbolic3", R"json({
  "name": "hyperbolic3",
  "description": "upper half-space model of hyperbolic 3-space, Levi-Civita",
  "dim": 3,
  "domain": [[-1, 1], [-1, 1], [0.5, 2]],
  "g": [["1/x3^2", "0", "0"], ["0", "1/x3^2", "0"], ["0", "0", "1/x3^2"]],
  "flags": {"expect_statistical": true, "expect_parallel_h": true},
  "expected_scalar": -6
})json"},
      {"twin-hessian", R"json({
  "name": "twin-hessian",
  "description": "g = I, Levi-Civita, J the Hessian of x1^2 + 2 x2^2 + x1^2 x2 (d^nabla J = 0, J and nabla J do not commute)",
  "dim": 2,
  "domain": [[-0.5, 0.5], [-0.5, 0.5]],
  "g": [["1", "0"], ["0", "1"]],
  "J": {"entries": [["2 + 2*x2", "2*x1"], ["2*x1", "4"]]},
  "flags": {"expect_statistical": true, "expect_parallel_h": true, "expect_dJ_zero": true}
})json"},
      {"skew-parallel", R"json({
  "name": "skew-parallel",
  "description": "constant skew h with a curved connection that keeps h parallel",
  "dim": 2,
  "domain": [[-1, 1], [-1, 1]],
  "metric": {"kind": "skew", "entries": [["0", "1"], ["-1", "0"]]},
  "connection": {"entries": [[["x2", "0"], ["0", "x1"]], [["0", "-x2"], ["0", "0"]]]},
  "flags": {"expect_statistical": false, "expect_parallel_h": true}
})json"},
      {"skew-generic", R"json({
  "name": "skew-generic",
  "description": "non-constant skew h with a generic connection",
  "dim": 2,
  "domain": [[-1, 1], [-1, 1]],
  "metric": {"kind": "skew", "entries": [["0", "exp(x1)"], ["-exp(x1)", "0"]]},
  "connection": {"entries": [[["x2", "0.2*x1"], ["0", "x1*x2"]], [["0.5", "0"], ["x1^2", "sin(x2)"]]]},
  "flags": {"expect_statistical": false, "expect_parallel_h": false}
})json"},
  };
  return list;
}

}  // namespace

std::vector<Scenario> builtin_scenarios() {
  std::vector<Scenario> out;
  for (const auto& [name, text] : manifests()) out.push_back(parse_manifest(text));
  return out;
}

std::string builtin_manifest(const std::string& name) {
  for (const auto& [n, text] : manifests()) {
    if (n == name) return text;
  }
  throw ConfigError("no builtin scenario named '" + name + "'");
}

Scenario builtin_scenario(const std::string& name) { return parse_manifest(builtin_manifest(name)); }

}  // namespace genverify
