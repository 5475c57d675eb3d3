#include "rtsched/engine.h"

#include <fmt/format.h>

#include "rtsched/channel.h"
#include "rtsched/traffic.h"

namespace rtsched {
namespace {

struct LivePackets {
  std::vector<bool> pending;  // arrived and not yet delivered

  explicit LivePackets(std::size_t n, std::span<const ClientId> arrivals) : pending(n, false) {
    for (ClientId id : arrivals) pending[Index(id)] = true;
  }
  bool Live(ClientId id, int t, std::span<const int> deadlines) const {
    return id != kIdleSlot && pending[Index(id)] && t <= deadlines[Index(id)];
  }
};

PeriodOutcome MakeOutcome(std::size_t n, std::span<const ClientId> arrivals) {
  PeriodOutcome out;
  out.clients.assign(n, Settlement{});
  for (ClientId id : arrivals) out.clients[Index(id)].arrived = true;
  return out;
}

void Finish(PeriodOutcome& out, const PeriodLimits& limits, int busy_slots) {
  out.idle_slots = limits.slots_per_period - busy_slots;
  out.nonrt_delivered = limits.nonrt_client ? out.idle_slots : 0;
  for (const Settlement& s : out.clients) {
    if (s.arrived && !s.delivered) ++out.expired;
  }
}

}  // namespace

SimulationError::SimulationError(std::int64_t period, const std::string& what)
    : std::runtime_error(fmt::format("period {}: {}", period, what)), period_(period) {}

PeriodOutcome RunPeriodFixedRate(const PeriodSnapshot& snapshot, const Schedule& schedule,
                                 const PeriodLimits& limits, std::span<const double> slot_uniforms) {
  if (std::holds_alternative<OrderedSubset>(schedule)) {
    throw std::invalid_argument("ordered-subset schedules require rate-adaptation mode");
  }
  const std::size_t n = limits.deadlines.size();
  PeriodOutcome out = MakeOutcome(n, snapshot.arrivals);
  LivePackets live(n, snapshot.arrivals);
  const std::vector<ClientId>* order = nullptr;
  const SlotAllocation* plan = std::get_if<SlotAllocation>(&schedule);
  order = plan ? &plan->fallback : &std::get<PriorityList>(schedule).order;

  int busy = 0;
  for (int t = 1; t <= limits.slots_per_period; ++t) {
    ClientId target = kIdleSlot;
    if (plan && live.Live(plan->alloc[static_cast<std::size_t>(t - 1)], t, limits.deadlines)) {
      target = plan->alloc[static_cast<std::size_t>(t - 1)];
    } else {
      for (ClientId id : *order) {
        if (live.Live(id, t, limits.deadlines)) {
          target = id;
          break;
        }
      }
    }
    if (target == kIdleSlot) continue;
    ++busy;
    Settlement& s = out.clients[Index(target)];
    ++s.slots_spent;
    if (slot_uniforms[static_cast<std::size_t>(t - 1)] < snapshot.reliability[Index(target)]) {
      s.delivered = true;
      live.pending[Index(target)] = false;
    }
  }
  Finish(out, limits, busy);
  return out;
}

PeriodOutcome RunPeriodRateAdaptation(const PeriodSnapshot& snapshot, const Schedule& schedule,
                                      const PeriodLimits& limits) {
  const std::size_t n = limits.deadlines.size();
  PeriodOutcome out = MakeOutcome(n, snapshot.arrivals);
  int next_slot = 1;

  if (const auto* subset = std::get_if<OrderedSubset>(&schedule)) {
    for (ClientId id : subset->order) {
      const int finish = next_slot + snapshot.service_time[Index(id)] - 1;
      if (finish > limits.deadlines[Index(id)]) {
        throw InfeasibleScheduleError(
            fmt::format("infeasible schedule: client {} would finish at slot {} after deadline {}", id, finish,
                        limits.deadlines[Index(id)]));
      }
      out.clients[Index(id)].slots_spent = snapshot.service_time[Index(id)];
      out.clients[Index(id)].delivered = true;
      next_slot = finish + 1;
    }
  } else if (const auto* list = std::get_if<PriorityList>(&schedule)) {
    for (ClientId id : list->order) {
      const int tau = limits.deadlines[Index(id)];
      if (next_slot > tau) continue;
      const int finish = next_slot + snapshot.service_time[Index(id)] - 1;
      Settlement& s = out.clients[Index(id)];
      if (finish <= tau) {
        s.slots_spent = finish - next_slot + 1;
        s.delivered = true;
        next_slot = finish + 1;
      } else {
        s.slots_spent = tau - next_slot + 1;
        next_slot = tau + 1;
      }
    }
  } else {
    throw std::invalid_argument("slot-allocation schedules require fixed-rate mode");
  }
  Finish(out, limits, next_slot - 1);
  return out;
}

MetricsSeries RunSimulation(const SystemConfig& config, PolicyId policy, const RunOptions& options) {
  MetricsSeries series;
  series.num_clients = config.num_clients();
  for (const Diagnostic& d : Validate(config)) {
    if (d.severity == Severity::kError) throw std::invalid_argument("invalid config: " + d.ToString());
    series.warnings.push_back(d.ToString());
  }
  if (auto why = CheckCompatibility(policy, config.mode)) throw std::invalid_argument(*why);

  const std::int64_t periods = options.periods.value_or(config.horizon_periods);
  const std::uint64_t seed = options.seed.value_or(config.seed);
  const auto n = static_cast<std::size_t>(config.num_clients());
  const int slots = config.slots_per_period;

  Rng arrival_rng(seed, Stream::kArrival);
  Rng channel_rng(seed, Stream::kChannel);
  Rng transmission_rng(seed, Stream::kTransmission);
  Rng policy_rng(seed, Stream::kPolicy);
  TrafficProcess traffic(config.clients, arrival_rng);
  ChannelProcess channel(config.channel, config.num_clients(), channel_rng);
  DebtBook book(config);
  const SchedulingContext ctx = SchedulingContext::FromConfig(config);
  series.warnings.insert(series.warnings.end(), ctx.warnings.begin(), ctx.warnings.end());
  const PeriodLimits limits{slots, ctx.deadlines, config.nonrt_client};

  std::vector<std::int64_t> delivered(n, 0);
  std::vector<std::int64_t> arrived(n, 0);
  std::int64_t nonrt = 0;
  std::int64_t expired = 0;
  std::vector<double> uniforms(static_cast<std::size_t>(slots));
  series.periods.reserve(static_cast<std::size_t>(std::max<std::int64_t>(periods, 0)));

  for (std::int64_t k = 0; k < periods; ++k) {
    try {
      PeriodSnapshot snap;
      snap.k = k;
      snap.channel_state = channel.Next(channel_rng);
      snap.arrivals = traffic.NextArrivals(k, arrival_rng);
      book.Accrue();
      snap.debts = book.Snapshot();
      if (config.mode == TransmissionMode::kFixedRate) {
        snap.reliability.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
          snap.reliability[i] =
              config.clients[i].channel_values[static_cast<std::size_t>(snap.channel_state.per_client[i])];
        }
        for (double& u : uniforms) u = transmission_rng.Uniform();
      } else {
        snap.service_time.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
          snap.service_time[i] = config.clients[i].ServiceTime(snap.channel_state.per_client[i]);
        }
      }

      const Schedule schedule = Decide(policy, snap, ctx, policy_rng);
      if (auto bad = CheckSchedule(schedule, snap.arrivals, slots)) {
        throw std::logic_error(fmt::format("{} produced an invalid schedule: {}", PolicyName(policy), *bad));
      }
      const PeriodOutcome outcome = config.mode == TransmissionMode::kFixedRate
                                        ? RunPeriodFixedRate(snap, schedule, limits, uniforms)
                                        : RunPeriodRateAdaptation(snap, schedule, limits);
      book.Settle(outcome.clients);

      PeriodRecord rec;
      rec.k = k;
      for (std::size_t i = 0; i < n; ++i) {
        if (outcome.clients[i].arrived) ++arrived[i];
        if (outcome.clients[i].delivered) ++delivered[i];
      }
      nonrt += outcome.nonrt_delivered;
      expired += outcome.expired;
      rec.delivered = delivered;
      rec.arrived = arrived;
      rec.time_based_debt = book.time_based().Values();
      rec.weighted_delivery_debt = book.weighted_delivery().Values();
      rec.delivery_debt = book.delivery().ExactValues();
      rec.channel_state = std::move(snap.channel_state.per_client);
      rec.nonrt_delivered = nonrt;
      rec.expired = expired;
      for (const Rational& r : rec.delivery_debt) rec.total_positive_debt += r.PositivePart().ToDouble();
      series.periods.push_back(std::move(rec));
    } catch (const std::exception& e) {
      throw SimulationError(k, e.what());
    }
  }
  return series;
}

}  // namespace rtsched
