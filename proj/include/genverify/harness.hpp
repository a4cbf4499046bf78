#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "genverify/gen_bundle.hpp"
#include "genverify/report.hpp"
#include "genverify/scenario.hpp"

namespace genverify {

/// Curvature tensors of the generalized alpha-connections, built on first use
/// and shared by the checks of one run.
class AlphaCurvatures {
 public:
  explicit AlphaCurvatures(const std::vector<PointData>& points) : points_(points), cache_(points.size()) {}
  const GenCurvatureTensor& at(const PointData& d, double alpha) const;

 private:
  const std::vector<PointData>& points_;
  mutable std::vector<std::map<double, GenCurvatureTensor>> cache_;
};

struct CheckContext {
  const Scenario& scenario;
  const Profile& profile;
  const std::vector<PointData>& points;
  const std::vector<double>& alphas;
  double tol;
  const AlphaCurvatures& curvatures;
};

/// One named identity or equivalence. `hypothesis` returns the violated
/// assumption, or an empty string when the check applies.
struct CheckDef {
  std::string id;
  std::string anchor;
  bool uses_alphas = false;
  std::optional<double> fixed_tol;  // pinned tolerance, ignores --tol
  std::function<std::string(const Scenario&, const Profile&)> hypothesis;
  std::function<void(const CheckContext&, CheckRecord&)> run;
};

/// Every check, sorted by id.
const std::vector<CheckDef>& check_registry();
std::vector<std::string> check_ids();

struct RunOptions {
  std::optional<int> points;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<std::vector<double>> alphas;
  bool timestamp = true;
};

/// Samples the points, validates the declared flags (ConfigError on mismatch)
/// and runs every selected check in id order.
CheckReport run(const Scenario& s, const RunOptions& opts = {});

}  // namespace genverify
