#ifndef RTSCHED_MODEL_H_
#define RTSCHED_MODEL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rtsched/markov.h"
#include "rtsched/rational.h"

namespace rtsched {

// Clients are numbered 1..N. Per-client vectors are indexed by id - 1.
using ClientId = int;
inline constexpr ClientId kIdleSlot = 0;
inline constexpr std::size_t Index(ClientId id) { return static_cast<std::size_t>(id - 1); }

enum class TransmissionMode { kFixedRate, kRateAdaptation };

// ---------------------------------------------------------------------------
// Arrivals

// Client has a packet in period k iff k mod interval == offset - 1.
struct PeriodicArrivals {
  int interval = 1;
  int offset = 1;
};

struct MarkovArrivalState {
  std::string label;
  double arrival_probability = 1.0;
};

// Markov-modulated arrivals: the activity state moves once per period and a
// packet arrives with the probability attached to the new state.
struct MarkovArrivals {
  std::vector<MarkovArrivalState> states;
  Matrix transition;
};

using ArrivalModel = std::variant<PeriodicArrivals, MarkovArrivals>;

// ---------------------------------------------------------------------------
// Channel

struct StaticChannel {};

struct TwoStateSojourn {
  double mean_good_periods = 1.0;
  double mean_bad_periods = 1.0;
};

// Independent good/bad chain per client. State 0 is good, 1 is bad.
struct PerClientTwoStateChannel {
  std::vector<TwoStateSojourn> sojourns;  // aligned with SystemConfig::clients
};

// One channel state shared by all clients.
struct GlobalMarkovChannel {
  std::vector<std::string> labels;
  Matrix transition;
};

using ChannelModel = std::variant<StaticChannel, PerClientTwoStateChannel, GlobalMarkovChannel>;

int ChannelStateCount(const ChannelModel& model);
std::string ChannelStateLabel(const ChannelModel& model, int state);
bool IsStaticChannel(const ChannelModel& model);

// ---------------------------------------------------------------------------
// Configuration

struct ClientSpec {
  ClientId id = 1;
  Rational q{1, 2};  // timely-throughput requirement, packets per period
  int tau = 1;       // last slot (1-based) in which delivery still counts
  ArrivalModel arrival = PeriodicArrivals{};
  // One entry per channel state: link reliability in fixed-rate mode, service
  // time in slots under rate adaptation.
  std::vector<double> channel_values;

  int ServiceTime(int state) const { return static_cast<int>(channel_values[static_cast<std::size_t>(state)]); }
};

struct SystemConfig {
  std::string name;
  std::vector<ClientSpec> clients;
  int slots_per_period = 1;
  TransmissionMode mode = TransmissionMode::kFixedRate;
  ChannelModel channel = StaticChannel{};
  std::int64_t horizon_periods = 1;
  std::uint64_t seed = 0;
  bool nonrt_client = false;

  int num_clients() const { return static_cast<int>(clients.size()); }
};

enum class Severity { kError, kWarning };

struct Diagnostic {
  ClientId client = 0;  // 0 for system-level fields
  std::string field;
  std::string rule;
  Severity severity = Severity::kError;

  std::string ToString() const;
  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

std::vector<Diagnostic> Validate(const SystemConfig& config);
bool HasErrors(std::span<const Diagnostic> diagnostics);

// ---------------------------------------------------------------------------
// Per-period view handed to policies

struct ChannelState {
  std::vector<int> per_client;  // channel-state index seen by each client
  friend bool operator==(const ChannelState&, const ChannelState&) = default;
};

struct DebtSnapshot {
  std::vector<double> time_based;
  std::vector<double> weighted_delivery;
  std::vector<Rational> delivery;
};

struct PeriodSnapshot {
  std::int64_t k = 0;
  ChannelState channel_state;
  std::vector<ClientId> arrivals;  // ascending, no duplicates
  DebtSnapshot debts;              // post-accrual values
  std::vector<double> reliability;  // p_{c_k,n}; fixed-rate mode
  std::vector<int> service_time;    // s_{c_k,n}; rate adaptation
};

// ---------------------------------------------------------------------------
// Policy decisions

struct PriorityList {
  std::vector<ClientId> order;
};

// Served back to back in the listed (earliest-deadline-first) order.
struct OrderedSubset {
  std::vector<ClientId> order;
  Rational value;
};

// alloc[t - 1] is the client planned for slot t, or kIdleSlot. fallback is the
// order used when the planned client has nothing left to send.
struct SlotAllocation {
  std::vector<ClientId> alloc;
  std::vector<ClientId> fallback;
};

using Schedule = std::variant<PriorityList, OrderedSubset, SlotAllocation>;

// Structural checks shared by every policy: no duplicates, arrived clients
// only, allocation length T. Returns a description of the first violation.
std::optional<std::string> CheckSchedule(const Schedule& schedule, std::span<const ClientId> arrivals,
                                         int slots_per_period);

// ---------------------------------------------------------------------------
// Run output

// State at the end of period k, i.e. after k + 1 periods have elapsed.
struct PeriodRecord {
  std::int64_t k = 0;
  std::vector<std::int64_t> delivered;  // cumulative d_n
  std::vector<std::int64_t> arrived;    // cumulative arrivals
  std::vector<double> time_based_debt;
  std::vector<double> weighted_delivery_debt;
  std::vector<Rational> delivery_debt;
  std::vector<int> channel_state;
  std::int64_t nonrt_delivered = 0;  // cumulative
  std::int64_t expired = 0;          // cumulative
  double total_positive_debt = 0.0;  // sum of delivery-debt positive parts
};

struct MetricsSeries {
  int num_clients = 0;
  std::vector<PeriodRecord> periods;
  std::vector<std::string> warnings;

  double DeliveryRatio(std::size_t period, ClientId client) const;
  double NonRealTimeThroughput() const;  // nonrt packets per period
};

}  // namespace rtsched

#endif  // RTSCHED_MODEL_H_
