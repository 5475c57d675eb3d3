#ifndef RTSCHED_VERIFY_H_
#define RTSCHED_VERIFY_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rtsched/model.h"

namespace rtsched {

using KnapsackSolver =
    std::function<OrderedSubset(std::span<const ClientId> arrivals, std::span<const Rational> debts,
                                std::span<const int> service_times, std::span<const int> deadlines,
                                int slots_per_period)>;

struct VerifyOptions {
  std::uint64_t seed = 20100601;
  // Solver under test in the knapsack suite; ModifiedKnapsack when empty.
  KnapsackSolver knapsack;
  int knapsack_instances = 1000;
  int ordering_instances = 500;
  int swap_instances = 500;
  int payoff_instances = 50;
  std::int64_t payoff_trials = 100000;
  std::int64_t frequency_periods = 200000;
  int feasible_instances = 8;
  int infeasible_instances = 4;
  std::int64_t fulfillment_periods = 10000;
};

struct SuiteResult {
  std::string name;
  bool passed = false;
  int checks = 0;
  int failures = 0;
  std::string detail;  // summary, or the first failure
  double seconds = 0.0;
};

// knapsack, ordering, swap, payoff, frequencies, feasibility
std::span<const std::string_view> SuiteNames();

// Throws std::invalid_argument for an unknown suite name.
SuiteResult RunSuite(std::string_view name, const VerifyOptions& options = {});
std::vector<SuiteResult> RunAllSuites(const VerifyOptions& options = {});

// Fixed-width pass/fail table.
std::string FormatSuiteTable(std::span<const SuiteResult> results);

}  // namespace rtsched

#endif  // RTSCHED_VERIFY_H_
