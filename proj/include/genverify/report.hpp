#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "genverify/fields.hpp"

namespace genverify {

enum class CheckStatus { pass, fail, skipped };

std::string to_string(CheckStatus s);

struct CheckRecord {
  std::string id;
  std::string anchor;  // the statement being checked
  CheckStatus status = CheckStatus::pass;
  std::string reason;  // why skipped, or what failed
  double tol = 0.0;
  double max_abs_error = 0.0;
  double max_scaled_error = 0.0;  // max of |a - b| / (1 + max(|a|, |b|))
  std::optional<Point> worst_point;
  std::vector<double> alphas;
  std::map<std::string, double> measured;  // named auxiliary quantities
  std::optional<Point> witness;             // a point exhibiting a nonzero quantity
};

struct CheckReport {
  std::string schema_version = "1";
  std::string scenario;
  std::uint64_t seed = 0;
  int points = 0;
  double tol = 0.0;
  std::vector<double> alphas;
  std::map<std::string, double> profile;
  std::vector<CheckRecord> checks;  // sorted by id
  std::string timestamp;

  int count(CheckStatus s) const;
  bool any_failed() const { return count(CheckStatus::fail) > 0; }
  const CheckRecord* find(const std::string& id) const;
};

/// JSON text; the timestamp field is omitted when `with_timestamp` is false.
std::string to_json(const CheckReport& r, bool with_timestamp = true);
std::string to_text(const CheckReport& r);

/// Current UTC time as ISO 8601.
std::string utc_timestamp();

}  // namespace genverify
