#include "rtsched/experiment.h"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "rtsched/config_io.h"
#include "rtsched/engine.h"

namespace rtsched {
namespace {

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  out << text;
  if (!out) throw std::runtime_error(fmt::format("write failed for {}", path.string()));
}

std::string RunFileName(PolicyId policy, std::uint64_t seed) {
  return fmt::format("run_{}_seed{}.csv", PolicyName(policy), seed);
}

}  // namespace

const PolicySummary& ExperimentResult::For(PolicyId id) const {
  for (const PolicySummary& p : policies) {
    if (p.policy == id) return p;
  }
  throw std::out_of_range(fmt::format("policy {} not in experiment", PolicyName(id)));
}

ExperimentSpec ParseExperimentSpec(std::string_view yaml_text, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(e.msg, e.mark.line >= 0 ? e.mark.line + 1 : 0);
  }
  if (!root.IsMap()) throw ConfigError("experiment spec must be a mapping");
  auto line = [](const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; };

  ExperimentSpec spec;
  const YAML::Node config = root["config"];
  if (!config) throw ConfigError("config: missing field", 0, "config");
  if (config.IsScalar()) {
    std::filesystem::path path = config.Scalar();
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    spec.config = LoadConfig(path);
  } else {
    YAML::Emitter out;
    out << config;
    spec.config = ParseConfig(out.c_str());
  }

  const YAML::Node policies = root["policies"];
  if (!policies || !policies.IsSequence()) throw ConfigError("policies: expected a list", line(root), "policies");
  for (const YAML::Node& p : policies) {
    const auto id = ParsePolicyId(p.Scalar());
    if (!id) throw ConfigError(fmt::format("policies: unknown policy '{}'", p.Scalar()), line(p), "policies");
    spec.policies.push_back(*id);
  }

  const YAML::Node seeds = root["seeds"];
  if (!seeds || !seeds.IsSequence()) throw ConfigError("seeds: expected a list", line(root), "seeds");
  for (const YAML::Node& s : seeds) {
    try {
      spec.seeds.push_back(s.as<std::uint64_t>());
    } catch (const YAML::Exception&) {
      throw ConfigError(fmt::format("seeds: expected an integer, got '{}'", s.Scalar()), line(s), "seeds");
    }
  }

  if (root["output_dir"]) {
    spec.output_dir = root["output_dir"].Scalar();
    if (spec.output_dir.is_relative() && !base_dir.empty()) spec.output_dir = base_dir / spec.output_dir;
  }
  if (root["granularity"]) {
    const std::string g = root["granularity"].Scalar();
    if (g == "per-period") {
      spec.granularity = Granularity::kPerPeriod;
    } else if (g == "summary") {
      spec.granularity = Granularity::kSummary;
    } else {
      throw ConfigError("granularity: expected per-period or summary", line(root["granularity"]), "granularity");
    }
  }
  if (root["periods"]) spec.periods = root["periods"].as<std::int64_t>();
  if (root["threads"]) spec.threads = root["threads"].as<unsigned>();
  return spec;
}

ExperimentSpec LoadExperimentSpec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open {}", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return ParseExperimentSpec(text.str(), path.parent_path());
}

std::vector<std::string> CheckExperimentSpec(const ExperimentSpec& spec) {
  std::vector<std::string> problems;
  if (spec.policies.empty()) problems.emplace_back("at least one policy is required");
  if (spec.seeds.empty()) problems.emplace_back("at least one seed is required");
  for (PolicyId id : spec.policies) {
    if (auto why = CheckCompatibility(id, spec.config.mode)) problems.push_back(*why);
  }
  for (const Diagnostic& d : Validate(spec.config)) {
    if (d.severity == Severity::kError) problems.push_back(d.ToString());
  }
  return problems;
}

std::string RunCsv(const SystemConfig& config, const MetricsSeries& series) {
  fmt::memory_buffer buf;
  fmt::format_to(std::back_inserter(buf), "period,client,r1,r2,r3,delivered,arrived,channel_state,nonrt_delivered\n");
  for (const PeriodRecord& rec : series.periods) {
    for (int i = 0; i < series.num_clients; ++i) {
      const auto u = static_cast<std::size_t>(i);
      fmt::format_to(std::back_inserter(buf), "{},{},{:.6f},{:.6f},{:.6f},{},{},{},{}\n", rec.k, i + 1,
                     rec.time_based_debt[u], rec.weighted_delivery_debt[u], rec.delivery_debt[u].ToDouble(),
                     rec.delivered[u], rec.arrived[u], ChannelStateLabel(config.channel, rec.channel_state[u]),
                     rec.nonrt_delivered);
    }
  }
  return fmt::to_string(buf);
}

PolicySummary Summarize(PolicyId policy, std::span<const RunSummary> runs) {
  PolicySummary s;
  s.policy = policy;
  std::vector<double> debt;
  std::vector<double> nonrt;
  for (const RunSummary& r : runs) {
    if (r.policy != policy) continue;
    debt.push_back(r.total_positive_debt_final);
    nonrt.push_back(r.nonrt_throughput_mean);
  }
  auto mean_sd = [](const std::vector<double>& v, double& mean, double& sd) {
    mean = 0.0;
    sd = 0.0;
    if (v.empty()) return;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    if (v.size() < 2) return;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  };
  mean_sd(debt, s.debt_mean, s.debt_sd);
  mean_sd(nonrt, s.nonrt_mean, s.nonrt_sd);
  return s;
}

std::string SummaryCsv(const ExperimentResult& result) {
  fmt::memory_buffer buf;
  fmt::format_to(std::back_inserter(buf), "policy,seed,total_positive_debt_final,nonrt_throughput_mean\n");
  for (const RunSummary& r : result.runs) {
    fmt::format_to(std::back_inserter(buf), "{},{},{:.6f},{:.6f}\n", PolicyName(r.policy), r.seed,
                   r.total_positive_debt_final, r.nonrt_throughput_mean);
  }
  for (const PolicySummary& p : result.policies) {
    fmt::format_to(std::back_inserter(buf), "{},mean,{:.6f},{:.6f}\n", PolicyName(p.policy), p.debt_mean,
                   p.nonrt_mean);
    fmt::format_to(std::back_inserter(buf), "{},sd,{:.6f},{:.6f}\n", PolicyName(p.policy), p.debt_sd, p.nonrt_sd);
  }
  return fmt::to_string(buf);
}

std::filesystem::path DefaultOutputDir() {
  if (const char* env = std::getenv("RTSCHED_OUTPUT_DIR"); env && *env) return env;
  return "rtsched-out";
}

ExperimentResult RunExperiment(const ExperimentSpec& spec) {
  if (auto problems = CheckExperimentSpec(spec); !problems.empty()) {
    std::string msg = "invalid experiment:";
    for (const std::string& p : problems) msg += " " + p + ";";
    throw std::invalid_argument(msg);
  }
  const bool write = !spec.output_dir.empty();
  if (write) std::filesystem::create_directories(spec.output_dir);

  struct Job {
    PolicyId policy;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (PolicyId p : spec.policies) {
    for (std::uint64_t s : spec.seeds) jobs.push_back({p, s});
  }
  std::vector<RunSummary> summaries(jobs.size());
  std::vector<std::exception_ptr> failures(jobs.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        RunOptions opts;
        opts.periods = spec.periods;
        opts.seed = jobs[i].seed;
        const MetricsSeries series = RunSimulation(spec.config, jobs[i].policy, opts);
        RunSummary& s = summaries[i];
        s.policy = jobs[i].policy;
        s.seed = jobs[i].seed;
        s.total_positive_debt_final = series.periods.empty() ? 0.0 : series.periods.back().total_positive_debt;
        s.nonrt_throughput_mean = series.NonRealTimeThroughput();
        if (write && spec.granularity == Granularity::kPerPeriod) {
          WriteFile(spec.output_dir / RunFileName(jobs[i].policy, jobs[i].seed), RunCsv(spec.config, series));
        }
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(jobs.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!failures[i]) continue;
    try {
      std::rethrow_exception(failures[i]);
    } catch (const std::exception& e) {
      throw std::runtime_error(
          fmt::format("run {} seed {} failed: {}", PolicyName(jobs[i].policy), jobs[i].seed, e.what()));
    }
  }

  ExperimentResult result;
  result.runs = std::move(summaries);
  for (PolicyId p : spec.policies) result.policies.push_back(Summarize(p, result.runs));
  if (write) {
    if (spec.granularity == Granularity::kPerPeriod) {
      for (const Job& j : jobs) result.files.push_back(spec.output_dir / RunFileName(j.policy, j.seed));
    }
    const auto summary = spec.output_dir / "summary.csv";
    WriteFile(summary, SummaryCsv(result));
    result.files.push_back(summary);
  }
  return result;
}

}  // namespace rtsched
