// rtsched command line: experiments, oracle suites, admission control and
// presets.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "rtsched/analysis.h"
#include "rtsched/config_io.h"
#include "rtsched/experiment.h"
#include "rtsched/presets.h"
#include "rtsched/verify.h"

namespace {

using namespace rtsched;

int RunCommand(const std::string& spec_path, std::optional<std::uint64_t> seed, std::optional<std::string> out,
               std::optional<std::int64_t> periods) {
  ExperimentSpec spec = LoadExperimentSpec(spec_path);
  if (seed) spec.seeds = {*seed};
  if (periods) spec.periods = *periods;
  if (out) {
    spec.output_dir = *out;
  } else if (spec.output_dir.empty()) {
    spec.output_dir = DefaultOutputDir();
  }
  const ExperimentResult result = RunExperiment(spec);
  for (const PolicySummary& p : result.policies) {
    fmt::print("{:<32} debt {:>12.4f} (sd {:.4f})  nonrt {:>9.4f} (sd {:.4f})\n", PolicyName(p.policy), p.debt_mean,
               p.debt_sd, p.nonrt_mean, p.nonrt_sd);
  }
  fmt::print("wrote {} files to {}\n", result.files.size(), spec.output_dir.string());
  return 0;
}

int VerifyCommand(const std::string& suite, std::optional<std::uint64_t> seed) {
  VerifyOptions opts;
  if (seed) opts.seed = *seed;
  std::vector<SuiteResult> results;
  if (suite.empty()) {
    results = RunAllSuites(opts);
  } else {
    results.push_back(RunSuite(suite, opts));
  }
  fmt::print("{}", FormatSuiteTable(results));
  for (const SuiteResult& r : results) {
    if (!r.passed) return 1;
  }
  return 0;
}

int FeasibilityCommand(const std::string& config_path, std::optional<std::uint64_t> seed,
                       std::optional<std::int64_t> periods) {
  const SystemConfig config = LoadConfig(config_path);
  FeasibilityOptions opts;
  if (seed) opts.seed = *seed;
  if (periods) opts.monte_carlo_periods = *periods;
  const FeasibilityReport report = FeasibilityTest(config, opts);
  fmt::print("subset,workload,idle_mean,idle_half_width,margin\n");
  for (const SubsetRow& row : report.subsets) {
    std::string members;
    for (int i = 0; i < config.num_clients(); ++i) {
      if (row.members & (1u << i)) members += fmt::format("{}{}", members.empty() ? "" : " ", i + 1);
    }
    fmt::print("{{{}}},{:.6f},{:.6f},{:.6f},{:.6f}\n", members, row.workload, row.idle_mean, row.idle_half_width,
               row.margin);
  }
  fmt::print("# verdict {} ({}), min relative margin {:.4f}\n", VerdictName(report.verdict),
             report.exact ? "exact" : "monte carlo", report.min_relative_margin);
  return report.verdict == Verdict::kInfeasible ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deadline-constrained wireless scheduling simulator"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> periods;
  std::optional<std::string> out;
  double scale = 1.0;

  auto* run = app.add_subcommand("run", "run an experiment spec (policies x seeds)");
  std::string spec_path;
  run->add_option("spec", spec_path, "experiment spec (YAML)")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "run only this seed");
  run->add_option("--out", out, "output directory (default $RTSCHED_OUTPUT_DIR or ./rtsched-out)");
  run->add_option("--periods", periods, "override the horizon");

  auto* verify = app.add_subcommand("verify", "run the oracle suites");
  std::string suite;
  verify->add_option("--suite", suite, "run one suite")->check(CLI::IsMember(std::vector<std::string>(
                                                             SuiteNames().begin(), SuiteNames().end())));
  verify->add_option("--seed", seed, "instance generator seed");

  auto* feas = app.add_subcommand("feasibility", "subset admission test for a static, T-deadline config");
  std::string config_path;
  feas->add_option("config", config_path, "config (YAML)")->required()->check(CLI::ExistingFile);
  feas->add_option("--seed", seed, "Monte Carlo seed");
  feas->add_option("--periods", periods, "Monte Carlo periods");

  auto* preset = app.add_subcommand("preset", "list or print built-in scenarios");
  preset->require_subcommand(1);
  auto* list = preset->add_subcommand("list", "list presets");
  auto* show = preset->add_subcommand("show", "print a preset as a full config");
  std::string preset_name;
  show->add_option("name", preset_name)->required();
  show->add_option("--scale", scale, "client-count scale")->check(CLI::PositiveNumber);
  show->add_option("--seed", seed, "seed to write into the config");
  show->add_option("--periods", periods, "horizon to write into the config");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return RunCommand(spec_path, seed, out, periods);
    if (*verify) return VerifyCommand(suite, seed);
    if (*feas) return FeasibilityCommand(config_path, seed, periods);
    if (*list) {
      for (const PresetInfo& p : Presets()) fmt::print("{:<22} {}\n", p.name, p.description);
      return 0;
    }
    if (*show) {
      SystemConfig config = BuildPreset(preset_name, scale);
      if (seed) config.seed = *seed;
      if (periods) config.horizon_periods = *periods;
      fmt::print("{}", EmitConfig(config));
      return 0;
    }
  } catch (const std::exception& e) {
    fmt::print(stderr, "rtsched: {}\n", e.what());
    return 1;
  }
  return 2;
}
