#ifndef RTSCHED_ENGINE_H_
#define RTSCHED_ENGINE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "rtsched/debts.h"
#include "rtsched/model.h"
#include "rtsched/policies.h"

namespace rtsched {

class InfeasibleScheduleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Wraps any failure inside a run with the period it happened in.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(std::int64_t period, const std::string& what);
  std::int64_t period() const { return period_; }

 private:
  std::int64_t period_;
};

struct PeriodOutcome {
  std::vector<Settlement> clients;  // indexed by client id - 1
  int idle_slots = 0;
  int nonrt_delivered = 0;
  int expired = 0;  // arrived this period and not delivered
};

struct PeriodLimits {
  int slots_per_period = 1;
  std::span<const int> deadlines;
  bool nonrt_client = false;
};

// Fixed-rate execution of one period. Slot t serves the highest-priority
// client whose packet is undelivered and unexpired (t <= tau); the attempt
// succeeds iff slot_uniforms[t - 1] < p_{c_k,n}. A SlotAllocation follows its
// plan and falls back to its fallback order. Idle slots go to the
// non-real-time client when enabled.
PeriodOutcome RunPeriodFixedRate(const PeriodSnapshot& snapshot, const Schedule& schedule,
                                 const PeriodLimits& limits, std::span<const double> slot_uniforms);

// Rate-adaptation execution of one period; transmissions are error free and
// take s_{c_k,n} slots. An OrderedSubset is served back to back and must meet
// every deadline (InfeasibleScheduleError otherwise). A PriorityList is served
// in order: a client whose deadline has passed when its turn comes is
// skipped; a transmission that cannot finish by its deadline occupies the
// slots up to the deadline and the packet is lost.
PeriodOutcome RunPeriodRateAdaptation(const PeriodSnapshot& snapshot, const Schedule& schedule,
                                      const PeriodLimits& limits);

struct RunOptions {
  std::optional<std::int64_t> periods;  // overrides horizon_periods (0 allowed)
  std::optional<std::uint64_t> seed;    // overrides the config seed
};

// Deterministic in (config, policy, seed). Arrival, channel, transmission and
// policy randomness come from independent streams, so two policies run with
// the same seed see the same arrivals, channel states and slot draws.
MetricsSeries RunSimulation(const SystemConfig& config, PolicyId policy, const RunOptions& options = {});

}  // namespace rtsched

#endif  // RTSCHED_ENGINE_H_
