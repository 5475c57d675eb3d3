#include "rtsched/model.h"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

namespace rtsched {

int ChannelStateCount(const ChannelModel& model) {
  struct Visitor {
    int operator()(const StaticChannel&) const { return 1; }
    int operator()(const PerClientTwoStateChannel&) const { return 2; }
    int operator()(const GlobalMarkovChannel& m) const { return static_cast<int>(m.labels.size()); }
  };
  return std::visit(Visitor{}, model);
}

std::string ChannelStateLabel(const ChannelModel& model, int state) {
  if (std::holds_alternative<PerClientTwoStateChannel>(model)) return state == 0 ? "good" : "bad";
  if (const auto* m = std::get_if<GlobalMarkovChannel>(&model)) {
    if (state >= 0 && state < static_cast<int>(m->labels.size())) return m->labels[static_cast<std::size_t>(state)];
  }
  return std::to_string(state);
}

bool IsStaticChannel(const ChannelModel& model) { return std::holds_alternative<StaticChannel>(model); }

std::string Diagnostic::ToString() const {
  const char* level = severity == Severity::kError ? "error" : "warning";
  if (client == 0) return fmt::format("{}: {}: {}", level, field, rule);
  return fmt::format("{}: client {}: {}: {}", level, client, field, rule);
}

bool HasErrors(std::span<const Diagnostic> diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::kError; });
}

namespace {

void ValidateArrival(const ClientSpec& c, std::vector<Diagnostic>& out) {
  if (const auto* p = std::get_if<PeriodicArrivals>(&c.arrival)) {
    if (p->interval < 1) out.push_back({c.id, "arrival.interval", "interval must be at least 1"});
    if (p->offset < 1 || p->offset > p->interval) {
      out.push_back({c.id, "arrival.offset", "offset must lie in 1..interval"});
    }
    return;
  }
  const auto& m = std::get<MarkovArrivals>(c.arrival);
  if (m.states.empty()) {
    out.push_back({c.id, "arrival.states", "markov arrivals need at least one state"});
    return;
  }
  for (const auto& s : m.states) {
    if (!(s.arrival_probability >= 0.0 && s.arrival_probability <= 1.0)) {
      out.push_back({c.id, "arrival.states", fmt::format("arrival probability of '{}' outside [0,1]", s.label)});
    }
  }
  if (m.transition.size() != m.states.size() || !IsStochastic(m.transition)) {
    out.push_back({c.id, "arrival.transition", "transition matrix must be square and row-stochastic"});
  } else if (!IsIrreducible(m.transition)) {
    out.push_back({c.id, "arrival.transition", "transition matrix must be irreducible"});
  }
}

void ValidateChannel(const SystemConfig& config, std::vector<Diagnostic>& out) {
  if (const auto* pc = std::get_if<PerClientTwoStateChannel>(&config.channel)) {
    if (pc->sojourns.size() != config.clients.size()) {
      out.push_back({0, "channel.sojourns", "one sojourn entry per client required"});
      return;
    }
    for (std::size_t i = 0; i < pc->sojourns.size(); ++i) {
      const auto& s = pc->sojourns[i];
      if (!(s.mean_good_periods >= 1.0) || !(s.mean_bad_periods >= 1.0)) {
        out.push_back({config.clients[i].id, "channel.sojourn", "mean sojourns must be at least 1 period"});
      }
    }
  } else if (const auto* g = std::get_if<GlobalMarkovChannel>(&config.channel)) {
    if (g->labels.empty() || g->transition.size() != g->labels.size() || !IsStochastic(g->transition)) {
      out.push_back({0, "channel.transition", "transition matrix must be square and row-stochastic"});
    } else if (!IsIrreducible(g->transition)) {
      out.push_back({0, "channel.transition", "transition matrix must be irreducible"});
    }
  }
}

}  // namespace

std::vector<Diagnostic> Validate(const SystemConfig& config) {
  std::vector<Diagnostic> out;
  if (config.clients.empty()) out.push_back({0, "clients", "at least one client required"});
  if (config.slots_per_period < 1) out.push_back({0, "slots_per_period", "period length must be at least 1"});
  if (config.horizon_periods < 1) out.push_back({0, "horizon_periods", "horizon must be at least 1 period"});
  ValidateChannel(config, out);

  const int states = ChannelStateCount(config.channel);
  const int slots = config.slots_per_period;
  for (std::size_t i = 0; i < config.clients.size(); ++i) {
    const ClientSpec& c = config.clients[i];
    if (c.id != static_cast<ClientId>(i + 1)) {
      out.push_back({c.id, "id", fmt::format("client ids must be 1..N in order (expected {})", i + 1)});
    }
    if (!c.q.IsPositive()) out.push_back({c.id, "q", "q must be positive"});
    if (c.q > Rational(1)) out.push_back({c.id, "q", "q cannot exceed one packet per period"});
    if (c.tau < 1) out.push_back({c.id, "tau", "tau must be at least 1"});
    if (c.tau > slots) out.push_back({c.id, "tau", "tau exceeds period length"});
    ValidateArrival(c, out);

    if (static_cast<int>(c.channel_values.size()) != states) {
      out.push_back({c.id, "channel", fmt::format("expected {} channel-state entries, got {}", states,
                                                  c.channel_values.size())});
      continue;
    }
    if (config.mode == TransmissionMode::kFixedRate) {
      for (double p : c.channel_values) {
        if (!(p > 0.0 && p <= 1.0)) {
          out.push_back({c.id, "channel", "reliability must lie in (0,1]"});
          break;
        }
      }
    } else {
      bool servable = false;
      bool bad_value = false;
      for (double s : c.channel_values) {
        if (!(s >= 1.0 && s <= slots && std::floor(s) == s)) bad_value = true;
        if (s <= c.tau) servable = true;
      }
      if (bad_value) {
        out.push_back({c.id, "channel", "service time must be an integer in 1..T"});
      } else if (!servable) {
        out.push_back({c.id, "channel", "service time exceeds tau in every channel state; client is unservable",
                       Severity::kWarning});
      }
    }
  }
  return out;
}

std::optional<std::string> CheckSchedule(const Schedule& schedule, std::span<const ClientId> arrivals,
                                         int slots_per_period) {
  const std::set<ClientId> arrived(arrivals.begin(), arrivals.end());
  auto check_list = [&](const std::vector<ClientId>& order) -> std::optional<std::string> {
    std::set<ClientId> seen;
    for (ClientId id : order) {
      if (!arrived.count(id)) return fmt::format("client {} scheduled without an arrival", id);
      if (!seen.insert(id).second) return fmt::format("client {} listed twice", id);
    }
    return std::nullopt;
  };
  if (const auto* p = std::get_if<PriorityList>(&schedule)) return check_list(p->order);
  if (const auto* s = std::get_if<OrderedSubset>(&schedule)) return check_list(s->order);
  const auto& a = std::get<SlotAllocation>(schedule);
  if (static_cast<int>(a.alloc.size()) != slots_per_period) {
    return fmt::format("allocation has {} slots, period has {}", a.alloc.size(), slots_per_period);
  }
  for (ClientId id : a.alloc) {
    if (id != kIdleSlot && !arrived.count(id)) return fmt::format("slot allocated to client {} without an arrival", id);
  }
  return check_list(a.fallback);
}

double MetricsSeries::DeliveryRatio(std::size_t period, ClientId client) const {
  const PeriodRecord& r = periods.at(period);
  const auto arrived = r.arrived[Index(client)];
  return arrived == 0 ? 0.0 : static_cast<double>(r.delivered[Index(client)]) / static_cast<double>(arrived);
}

double MetricsSeries::NonRealTimeThroughput() const {
  if (periods.empty()) return 0.0;
  return static_cast<double>(periods.back().nonrt_delivered) / static_cast<double>(periods.size());
}

}  // namespace rtsched
