#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "genverify/errors.hpp"
#include "genverify/harness.hpp"

namespace genverify {
namespace {

RunOptions quick(int points = 4) {
  RunOptions o;
  o.points = points;
  o.alphas = std::vector<double>{-1.0, 0.5};
  o.timestamp = false;
  return o;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("genverify_test_" + name)).string();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

const std::string kSmall = R"json({
  "name": "small",
  "dim": 2,
  "domain": [[-1, 1], [-1, 1]],
  "metric": {"kind": "symmetric", "entries": [["exp(x1)", "0"], ["0", "1"]]},
  "connection": "zero",
  "checks": ["musical_maps_invert", "dual_connection_duality", "ricci_parallel_reduction"],
  "tolerances": {"musical_maps_invert": 1e-3}
})json";

int cli(const std::string& args) {
  const std::string cmd = std::string(GENVERIFY_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Builtins, AtLeastSevenWithUniqueNames) {
  const std::vector<Scenario> all = builtin_scenarios();
  EXPECT_GE(all.size(), 7u);
  std::set<std::string> names;
  for (const Scenario& s : all) EXPECT_TRUE(names.insert(s.name).second) << s.name;
  for (const char* n : {"flat-euclid", "exp-diag", "gauss-fisher", "sphere", "twin-diag", "skew", "noncommuting-F"})
    EXPECT_TRUE(names.count(n)) << n;
  EXPECT_THROW(builtin_scenario("nope"), ConfigError);
}

TEST(Registry, IdsSortedAndUnique) {
  const std::vector<std::string> ids = check_ids();
  EXPECT_TRUE(std::is_sorted(ids.begin(), ids.end()));
  EXPECT_EQ(std::set<std::string>(ids.begin(), ids.end()).size(), ids.size());
  for (const CheckDef& d : check_registry()) EXPECT_FALSE(d.anchor.empty()) << d.id;
}

TEST(Manifest, SymmetricKindWithSkewEntriesRejected) {
  const std::string text = R"json({"name": "bad", "dim": 2, "domain": [[-1, 1], [-1, 1]],
    "metric": {"kind": "symmetric", "entries": [["0", "1"], ["-1", "0"]]}, "connection": "zero"})json";
  EXPECT_THROW(parse_manifest(text), ConfigError);
}

TEST(Manifest, VariableOutsideDimensionReportsOffset) {
  const std::string text = R"json({"name": "bad", "dim": 2, "domain": [[-1, 1], [-1, 1]],
    "metric": {"kind": "symmetric", "entries": [["1 + x3^2", "0"], ["0", "1"]]}, "connection": "zero"})json";
  try {
    parse_manifest(text);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
    EXPECT_NE(std::string(e.what()).find("metric.entries"), std::string::npos) << e.what();
  }
}

TEST(Manifest, StructuralErrors) {
  EXPECT_THROW(parse_manifest("{"), ParseError);
  EXPECT_THROW(parse_manifest(R"({"name": "x", "dim": 2})"), ConfigError);
  EXPECT_THROW(parse_manifest(R"({"name": "x", "dim": 1, "domain": [[1, 0]], "g": [["1"]]})"), ConfigError);
  EXPECT_THROW(load_manifest(temp_path("missing.json")), ConfigError);
}

TEST(Run, UnknownCheckIdIsConfigError) {
  Scenario s = parse_manifest(kSmall);
  s.checks.push_back("no_such_check");
  EXPECT_THROW(run(s, quick()), ConfigError);
}

TEST(Run, DeclaredFlagMismatchIsConfigError) {
  Scenario s = builtin_scenario("exp-diag");
  s.flags.parallel_h = true;
  EXPECT_THROW(run(s, quick()), ConfigError);
}

TEST(Run, BadOptionsAreConfigErrors) {
  const Scenario s = parse_manifest(kSmall);
  RunOptions o = quick();
  o.points = 0;
  EXPECT_THROW(run(s, o), ConfigError);
  o = quick();
  o.tol = -1.0;
  EXPECT_THROW(run(s, o), ConfigError);
  o = quick();
  o.alphas = std::vector<double>{};
  EXPECT_THROW(run(s, o), ConfigError);
}

TEST(Run, SelectedChecksAndToleranceOverride) {
  const CheckReport r = run(parse_manifest(kSmall), quick());
  ASSERT_EQ(r.checks.size(), 3u);
  EXPECT_EQ(r.schema_version, "1");
  const CheckRecord* m = r.find("musical_maps_invert");
  ASSERT_NE(m, nullptr);
  EXPECT_DOUBLE_EQ(m->tol, 1e-3);
  EXPECT_EQ(m->status, CheckStatus::pass);
  EXPECT_DOUBLE_EQ(r.find("dual_connection_duality")->tol, 1e-8);
  // exp-diag has nabla h != 0
  const CheckRecord* p = r.find("ricci_parallel_reduction");
  EXPECT_EQ(p->status, CheckStatus::skipped);
  EXPECT_FALSE(p->reason.empty());
}

TEST(Run, SkippedChecksAlwaysSayWhy) {
  const CheckReport r = run(builtin_scenario("skew"), quick(3));
  int skipped = 0;
  for (const CheckRecord& c : r.checks) {
    if (c.status != CheckStatus::skipped) continue;
    ++skipped;
    EXPECT_FALSE(c.reason.empty()) << c.id;
  }
  EXPECT_GT(skipped, 0);
  EXPECT_EQ(r.find("ricci_closed_form")->status, CheckStatus::skipped);
}

TEST(Run, DeterministicForFixedSeed) {
  const Scenario s = builtin_scenario("exp-diag");
  EXPECT_EQ(to_json(run(s, quick()), false), to_json(run(s, quick()), false));
  RunOptions other = quick();
  other.seed = 7;
  EXPECT_NE(to_json(run(s, quick()), false), to_json(run(s, other), false));
}

TEST(Run, ManifestFileReproducesBuiltin) {
  const std::string path = temp_path("exp_diag.json");
  write_file(path, builtin_manifest("exp-diag"));
  EXPECT_EQ(to_json(run(load_manifest(path), quick()), false),
            to_json(run(builtin_scenario("exp-diag"), quick()), false));
  std::filesystem::remove(path);
}

TEST(Run, SphereCurvatureChecksPass) {
  const CheckReport r = run(builtin_scenario("sphere"), quick(5));
  for (const char* id : {"base_scalar_curvature_value", "base_ricci_constant_curvature", "ricci_parallel_reduction",
                         "gen_scalar_curvature_value", "conjugate_ricci_symmetry"}) {
    const CheckRecord* c = r.find(id);
    ASSERT_NE(c, nullptr) << id;
    EXPECT_EQ(c->status, CheckStatus::pass) << id << ": " << c->reason;
  }
}

TEST(Report, JsonHasSchemaAndSummary) {
  const CheckReport r = run(parse_manifest(kSmall), quick());
  const std::string j = to_json(r, true);
  EXPECT_NE(j.find("\"schema_version\": \"1\""), std::string::npos);
  EXPECT_NE(j.find("\"summary\""), std::string::npos);
  EXPECT_NE(j.find("\"timestamp\""), std::string::npos);
  EXPECT_EQ(to_json(r, false).find("\"timestamp\""), std::string::npos);
  EXPECT_NE(to_text(r).find("PASS  musical_maps_invert"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli("list"), 0);
  EXPECT_EQ(cli("run --scenario no-such-scenario"), 2);
  EXPECT_EQ(cli("run"), 2);
  EXPECT_EQ(cli("run --scenario sphere --points 0"), 2);
  EXPECT_EQ(cli("run --scenario sphere --alphas 1,x"), 2);
  EXPECT_EQ(cli("run --scenario sphere --format xml"), 2);
  const std::string small = temp_path("small.json");
  write_file(small, kSmall);
  EXPECT_EQ(cli("run --manifest " + small + " --points 3"), 0);
  // the average-connection display disagrees everywhere
  EXPECT_EQ(cli("run --scenario flat-euclid --points 2 --alphas 0"), 1);
  const std::string out = temp_path("report.json");
  EXPECT_EQ(cli("run --manifest " + small + " --points 3 --format json --out " + out), 0);
  std::ifstream in(out);
  const std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_NE(body.find("\"schema_version\": \"1\""), std::string::npos);
  std::filesystem::remove(small);
  std::filesystem::remove(out);
}

}  // namespace
}  // namespace genverify
