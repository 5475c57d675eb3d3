#ifndef RTSCHED_EXPERIMENT_H_
#define RTSCHED_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rtsched/model.h"
#include "rtsched/policies.h"

namespace rtsched {

enum class Granularity { kPerPeriod, kSummary };

// YAML form:
//
//   config: configs/two-clients.yaml   # path, relative to the spec file
//   # or config: {preset: voip-gilbert-elliot, scale: 0.3}
//   policies: [random, joint-debt-channel]
//   seeds: [1, 2, 3]
//   output_dir: out/ge                  # optional
//   granularity: per-period             # or summary
//   periods: 5000                       # optional horizon override
struct ExperimentSpec {
  SystemConfig config;
  std::vector<PolicyId> policies;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path output_dir;
  Granularity granularity = Granularity::kPerPeriod;
  std::optional<std::int64_t> periods;
  unsigned threads = 0;  // 0: hardware concurrency
};

ExperimentSpec ParseExperimentSpec(std::string_view yaml_text, const std::filesystem::path& base_dir = {});
ExperimentSpec LoadExperimentSpec(const std::filesystem::path& path);

// Empty when the spec can run: at least one policy and seed, every policy
// compatible with the mode, and a valid config.
std::vector<std::string> CheckExperimentSpec(const ExperimentSpec& spec);

struct RunSummary {
  PolicyId policy{};
  std::uint64_t seed = 0;
  double total_positive_debt_final = 0.0;
  double nonrt_throughput_mean = 0.0;
};

struct PolicySummary {
  PolicyId policy{};
  double debt_mean = 0.0;
  double debt_sd = 0.0;  // sample standard deviation across seeds
  double nonrt_mean = 0.0;
  double nonrt_sd = 0.0;
};

struct ExperimentResult {
  std::vector<RunSummary> runs;          // policy-major, seeds in spec order
  std::vector<PolicySummary> policies;   // spec order
  std::vector<std::filesystem::path> files;

  const PolicySummary& For(PolicyId id) const;
};

// Runs every (policy, seed) pair concurrently. When output_dir is non-empty
// writes run_<policy>_seed<seed>.csv (per-period granularity only) and
// summary.csv. Throws on any failed run, after all runs have finished.
ExperimentResult RunExperiment(const ExperimentSpec& spec);

// Columns: period,client,r1,r2,r3,delivered,arrived,channel_state,nonrt_delivered
std::string RunCsv(const SystemConfig& config, const MetricsSeries& series);
// Columns: policy,seed,total_positive_debt_final,nonrt_throughput_mean. One
// row per run, then one "mean" and one "sd" row per policy.
std::string SummaryCsv(const ExperimentResult& result);

PolicySummary Summarize(PolicyId policy, std::span<const RunSummary> runs);

// Default output directory: $RTSCHED_OUTPUT_DIR, else "rtsched-out".
std::filesystem::path DefaultOutputDir();

}  // namespace rtsched

#endif  // RTSCHED_EXPERIMENT_H_
