#ifndef RTSCHED_POLICIES_H_
#define RTSCHED_POLICIES_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rtsched/model.h"
#include "rtsched/rng.h"

namespace rtsched {

enum class PolicyId {
  kRandom,
  kLargestTimeBasedDebt,
  kLargestWeightedDeliveryDebt,
  kModifiedKnapsack,
  kJointDebtChannel,
  kAdaptiveAllocation,
};

std::string_view PolicyName(PolicyId id);
std::optional<PolicyId> ParsePolicyId(std::string_view name);
std::span<const PolicyId> AllPolicies();

// Returns a reason when the policy cannot run in the given mode.
std::optional<std::string> CheckCompatibility(PolicyId id, TransmissionMode mode);

// Uniformly random permutation of the arrival set.
PriorityList RandomPriority(std::span<const ClientId> arrivals, Rng& rng);

// Arrived clients with debts[n] > 0, largest first, ties by ascending id.
// debts is indexed by client id - 1.
PriorityList LargestDebtFirst(std::span<const ClientId> arrivals, std::span<const double> debts);

// Max-weight subset under rate adaptation. Picks S' among arrived clients
// with positive delivery debt maximising sum r_n subject to the EDF prefix
// constraint: served in deadline order, each client finishes by its own
// deadline. O(N*T) dynamic program over clients sorted by (tau, id);
// including a client requires a strictly larger value than excluding it.
OrderedSubset ModifiedKnapsack(std::span<const ClientId> arrivals, std::span<const Rational> debts,
                               std::span<const int> service_times, std::span<const int> deadlines,
                               int slots_per_period);

// Arrived clients sorted by r_n * p_n descending, keeping only positive
// products; ties by ascending id.
PriorityList JointDebtChannel(std::span<const ClientId> arrivals, std::span<const Rational> debts,
                              std::span<const double> reliability);

struct TransmissionBudget {
  int transmissions = 1;
  bool clamped = false;  // delivery ratio >= 1 made the estimate undefined
};

// Smallest number of attempts that meets the delivery ratio with reliability
// p: ceil(log_{1-p}(1 - ratio)), within [1, T]. A ratio >= 1 clamps to T.
TransmissionBudget EstimateTransmissions(double reliability, double delivery_ratio, int slots_per_period);

// Backward slot-by-slot allocation. Arrived clients are ranked by time-based
// debt; slot t (T down to 1) goes to the best-ranked client with tau >= t
// and budget left, and becomes idle if that client's debt is not positive.
// budgets and deadlines are indexed by client id - 1.
SlotAllocation AdaptiveAllocation(std::span<const ClientId> arrivals, std::span<const double> time_based_debts,
                                  std::span<const int> budgets, std::span<const int> deadlines,
                                  int slots_per_period);

// Per-run constants the policies need beyond the snapshot.
struct SchedulingContext {
  TransmissionMode mode = TransmissionMode::kFixedRate;
  int slots_per_period = 1;
  bool static_channel = true;
  std::vector<int> deadlines;
  std::vector<double> arrival_rate;
  std::vector<double> delivery_ratio;
  std::vector<int> transmission_budget;  // from the time-averaged reliability
  std::vector<std::string> warnings;

  static SchedulingContext FromConfig(const SystemConfig& config);
};

// Weighted-delivery debt as the ranking key: the ledger value under a static
// channel, otherwise delivery debt divided by the current link reliability
// (multiplied by the current service time under rate adaptation).
std::vector<double> WeightedDeliveryKey(const PeriodSnapshot& snapshot, const SchedulingContext& ctx);

Schedule Decide(PolicyId id, const PeriodSnapshot& snapshot, const SchedulingContext& ctx, Rng& rng);

}  // namespace rtsched

#endif  // RTSCHED_POLICIES_H_
