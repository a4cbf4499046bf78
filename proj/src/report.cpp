#include "genverify/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

#include <json.hpp>

namespace genverify {

using nlohmann::ordered_json;

namespace {

// JSON has no infinities or NaN; keep them readable instead of null.
ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

ordered_json numbers(const std::vector<double>& v) {
  ordered_json a = ordered_json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::fail:
      return "fail";
    case CheckStatus::skipped:
      return "skipped";
  }
  return "fail";
}

int CheckReport::count(CheckStatus s) const {
  int c = 0;
  for (const CheckRecord& r : checks) c += r.status == s;
  return c;
}

const CheckRecord* CheckReport::find(const std::string& id) const {
  for (const CheckRecord& r : checks) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

std::string to_json(const CheckReport& r, bool with_timestamp) {
  ordered_json j;
  j["schema_version"] = r.schema_version;
  j["scenario"] = r.scenario;
  j["seed"] = r.seed;
  j["points"] = r.points;
  j["tol"] = number(r.tol);
  j["alphas"] = numbers(r.alphas);
  ordered_json prof = ordered_json::object();
  for (const auto& [k, v] : r.profile) prof[k] = number(v);
  j["profile"] = prof;
  j["summary"] = {{"pass", r.count(CheckStatus::pass)},
                  {"fail", r.count(CheckStatus::fail)},
                  {"skipped", r.count(CheckStatus::skipped)}};
  ordered_json checks = ordered_json::array();
  for (const CheckRecord& c : r.checks) {
    ordered_json cj;
    cj["id"] = c.id;
    cj["anchor"] = c.anchor;
    cj["status"] = to_string(c.status);
    if (!c.reason.empty()) cj["reason"] = c.reason;
    if (c.status != CheckStatus::skipped) {
      cj["tol"] = number(c.tol);
      cj["max_abs_error"] = number(c.max_abs_error);
      cj["max_scaled_error"] = number(c.max_scaled_error);
      cj["worst_point"] = c.worst_point ? numbers(*c.worst_point) : ordered_json(nullptr);
      cj["alphas"] = numbers(c.alphas);
      if (!c.measured.empty()) {
        ordered_json m = ordered_json::object();
        for (const auto& [k, v] : c.measured) m[k] = number(v);
        cj["measured"] = m;
      }
      if (c.witness) cj["witness"] = numbers(*c.witness);
    }
    checks.push_back(cj);
  }
  j["checks"] = checks;
  if (with_timestamp) j["timestamp"] = r.timestamp;
  return j.dump(2) + "\n";
}

std::string to_text(const CheckReport& r) {
  std::ostringstream os;
  os << "scenario " << r.scenario << "  seed " << r.seed << "  points " << r.points << "  tol "
     << short_number(r.tol) << "\n";
  for (const CheckRecord& c : r.checks) {
    std::string tag = c.status == CheckStatus::pass ? "PASS" : c.status == CheckStatus::fail ? "FAIL" : "SKIP";
    os << tag << "  " << c.id;
    if (c.status == CheckStatus::skipped) {
      os << "  (" << c.reason << ")\n";
      continue;
    }
    os << "  err " << short_number(c.max_abs_error);
    if (c.worst_point && c.status == CheckStatus::fail) os << " at " << format_point(*c.worst_point);
    if (!c.reason.empty()) os << "  " << c.reason;
    os << "\n";
  }
  os << r.count(CheckStatus::pass) << " passed, " << r.count(CheckStatus::fail) << " failed, "
     << r.count(CheckStatus::skipped) << " skipped\n";
  return os.str();
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace genverify
