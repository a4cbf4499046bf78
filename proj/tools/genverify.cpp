// genverify: run identity checks over builtin or manifest scenarios.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "genverify/errors.hpp"
#include "genverify/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitConfig = 2;

std::vector<double> parse_alphas(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw genverify::UsageError("bad alpha value '" + item + "'");
    }
    if (used != item.size()) throw genverify::UsageError("bad alpha value '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw genverify::UsageError("--alphas needs at least one value");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Check generalized dualistic-structure identities on sampled points"};
  app.require_subcommand(1);

  CLI::App* list = app.add_subcommand("list", "List builtin scenarios");

  CLI::App* run = app.add_subcommand("run", "Run the checks for one scenario");
  std::string scenario, manifest, alphas, format = "text", out;
  std::optional<int> points;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  auto* opt_s = run->add_option("--scenario", scenario, "builtin scenario name");
  auto* opt_m = run->add_option("--manifest", manifest, "manifest file");
  opt_s->excludes(opt_m);
  run->add_option("--points", points, "number of sample points");
  run->add_option("--seed", seed, "sampler seed");
  run->add_option("--tol", tol, "default tolerance");
  run->add_option("--alphas", alphas, "comma separated alpha values");
  run->add_option("--format", format, "report format")->check(CLI::IsMember({"text", "json"}));
  run->add_option("--out", out, "write the report to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (list->parsed()) {
      for (const genverify::Scenario& s : genverify::builtin_scenarios()) {
        std::printf("%-18s %d-D  %s\n", s.name.c_str(), s.dim, s.description.c_str());
      }
      return kExitOk;
    }

    if (scenario.empty() == manifest.empty()) {
      throw genverify::UsageError("run needs exactly one of --scenario or --manifest");
    }
    const genverify::Scenario s =
        manifest.empty() ? genverify::builtin_scenario(scenario) : genverify::load_manifest(manifest);
    genverify::RunOptions opts;
    opts.points = points;
    opts.seed = seed;
    opts.tol = tol;
    if (!alphas.empty()) opts.alphas = parse_alphas(alphas);

    const genverify::CheckReport report = genverify::run(s, opts);
    const std::string text = format == "json" ? genverify::to_json(report) : genverify::to_text(report);
    if (out.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(out, std::ios::binary);
      if (!f) throw genverify::ConfigError("cannot open '" + out + "' for writing");
      f << text;
      if (!f) throw genverify::ConfigError("failed writing '" + out + "'");
    }
    return report.any_failed() ? kExitFailed : kExitOk;
  } catch (const genverify::Error& e) {
    std::cerr << "genverify: " << e.what() << "\n";
    return kExitConfig;
  }
}
