#include "rtsched/policies.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "rtsched/channel.h"
#include "rtsched/traffic.h"

namespace rtsched {
namespace {

constexpr std::array<PolicyId, 6> kAllPolicies = {
    PolicyId::kRandom,           PolicyId::kLargestTimeBasedDebt, PolicyId::kLargestWeightedDeliveryDebt,
    PolicyId::kModifiedKnapsack, PolicyId::kJointDebtChannel,     PolicyId::kAdaptiveAllocation,
};

// Descending by key, ascending id on ties; keeps only positive keys.
std::vector<ClientId> RankPositive(std::span<const ClientId> arrivals, std::span<const double> key) {
  std::vector<ClientId> order;
  for (ClientId id : arrivals) {
    if (key[Index(id)] > 0.0) order.push_back(id);
  }
  std::sort(order.begin(), order.end(), [&](ClientId a, ClientId b) {
    const double ka = key[Index(a)];
    const double kb = key[Index(b)];
    return ka != kb ? ka > kb : a < b;
  });
  return order;
}

}  // namespace

std::string_view PolicyName(PolicyId id) {
  switch (id) {
    case PolicyId::kRandom:
      return "random";
    case PolicyId::kLargestTimeBasedDebt:
      return "largest-time-based-debt";
    case PolicyId::kLargestWeightedDeliveryDebt:
      return "largest-weighted-delivery-debt";
    case PolicyId::kModifiedKnapsack:
      return "modified-knapsack";
    case PolicyId::kJointDebtChannel:
      return "joint-debt-channel";
    case PolicyId::kAdaptiveAllocation:
      return "adaptive-allocation";
  }
  return "?";
}

std::optional<PolicyId> ParsePolicyId(std::string_view name) {
  for (PolicyId id : kAllPolicies) {
    if (PolicyName(id) == name) return id;
  }
  return std::nullopt;
}

std::span<const PolicyId> AllPolicies() { return kAllPolicies; }

std::optional<std::string> CheckCompatibility(PolicyId id, TransmissionMode mode) {
  if (id == PolicyId::kModifiedKnapsack && mode != TransmissionMode::kRateAdaptation) {
    return "modified-knapsack requires rate-adaptation mode";
  }
  if ((id == PolicyId::kJointDebtChannel || id == PolicyId::kAdaptiveAllocation) &&
      mode != TransmissionMode::kFixedRate) {
    return fmt::format("{} requires fixed-rate mode", PolicyName(id));
  }
  return std::nullopt;
}

PriorityList RandomPriority(std::span<const ClientId> arrivals, Rng& rng) {
  std::vector<ClientId> order(arrivals.begin(), arrivals.end());
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.Below(i)]);
  }
  return {std::move(order)};
}

PriorityList LargestDebtFirst(std::span<const ClientId> arrivals, std::span<const double> debts) {
  return {RankPositive(arrivals, debts)};
}

OrderedSubset ModifiedKnapsack(std::span<const ClientId> arrivals, std::span<const Rational> debts,
                               std::span<const int> service_times, std::span<const int> deadlines,
                               int slots_per_period) {
  std::vector<ClientId> items;
  for (ClientId id : arrivals) {
    if (debts[Index(id)].IsPositive()) items.push_back(id);
  }
  std::sort(items.begin(), items.end(), [&](ClientId a, ClientId b) {
    const int ta = deadlines[Index(a)];
    const int tb = deadlines[Index(b)];
    return ta != tb ? ta < tb : a < b;
  });

  const std::size_t m = items.size();
  const auto width = static_cast<std::size_t>(slots_per_period) + 1;
  // best[i][t]: max debt from the first i items, all finishing by slot t.
  std::vector<std::vector<Rational>> best(m + 1, std::vector<Rational>(width));
  std::vector<std::vector<bool>> take(m + 1, std::vector<bool>(width, false));
  for (std::size_t i = 1; i <= m; ++i) {
    const ClientId id = items[i - 1];
    const int tau = deadlines[Index(id)];
    const int s = service_times[Index(id)];
    const Rational& r = debts[Index(id)];
    for (std::size_t t = 1; t < width; ++t) {
      if (static_cast<int>(t) > tau) {
        best[i][t] = best[i][t - 1];
        continue;
      }
      if (static_cast<int>(t) >= s) {
        Rational with = r + best[i - 1][t - static_cast<std::size_t>(s)];
        if (with > best[i - 1][t]) {
          best[i][t] = with;
          take[i][t] = true;
          continue;
        }
      }
      best[i][t] = best[i - 1][t];
    }
  }

  OrderedSubset result;
  result.value = best[m][width - 1];
  auto t = static_cast<int>(width - 1);
  for (std::size_t i = m; i >= 1; --i) {
    const ClientId id = items[i - 1];
    t = std::min(t, deadlines[Index(id)]);
    if (t > 0 && take[i][static_cast<std::size_t>(t)]) {
      result.order.push_back(id);
      t -= service_times[Index(id)];
    }
  }
  std::reverse(result.order.begin(), result.order.end());
  return result;
}

PriorityList JointDebtChannel(std::span<const ClientId> arrivals, std::span<const Rational> debts,
                              std::span<const double> reliability) {
  std::vector<double> key(debts.size(), 0.0);
  for (ClientId id : arrivals) key[Index(id)] = debts[Index(id)].ToDouble() * reliability[Index(id)];
  return {RankPositive(arrivals, key)};
}

TransmissionBudget EstimateTransmissions(double reliability, double delivery_ratio, int slots_per_period) {
  if (delivery_ratio >= 1.0) return {slots_per_period, true};
  if (reliability >= 1.0 || delivery_ratio <= 0.0) return {1, false};
  const double exact = std::log1p(-delivery_ratio) / std::log1p(-reliability);
  // Absorb rounding when the exact answer is an integer, e.g. log_0.5(0.25).
  const int attempts = static_cast<int>(std::ceil(exact - 1e-9));
  return {std::clamp(attempts, 1, slots_per_period), false};
}

SlotAllocation AdaptiveAllocation(std::span<const ClientId> arrivals, std::span<const double> time_based_debts,
                                  std::span<const int> budgets, std::span<const int> deadlines,
                                  int slots_per_period) {
  std::vector<ClientId> ranked(arrivals.begin(), arrivals.end());
  std::sort(ranked.begin(), ranked.end(), [&](ClientId a, ClientId b) {
    const double da = time_based_debts[Index(a)];
    const double db = time_based_debts[Index(b)];
    return da != db ? da > db : a < b;
  });
  std::vector<int> remaining;
  remaining.reserve(ranked.size());
  for (ClientId id : ranked) remaining.push_back(budgets[Index(id)]);

  SlotAllocation out;
  out.alloc.assign(static_cast<std::size_t>(slots_per_period), kIdleSlot);
  for (int t = slots_per_period; t >= 1; --t) {
    std::size_t j = 0;
    while (j < ranked.size() && (deadlines[Index(ranked[j])] < t || remaining[j] <= 0)) ++j;
    if (j == ranked.size()) continue;
    if (time_based_debts[Index(ranked[j])] > 0.0) out.alloc[static_cast<std::size_t>(t - 1)] = ranked[j];
    --remaining[j];
  }
  out.fallback = RankPositive(arrivals, time_based_debts);
  return out;
}

SchedulingContext SchedulingContext::FromConfig(const SystemConfig& config) {
  SchedulingContext ctx;
  ctx.mode = config.mode;
  ctx.slots_per_period = config.slots_per_period;
  ctx.static_channel = IsStaticChannel(config.channel);
  for (const auto& c : config.clients) {
    const double rate = ArrivalFrequency(c.arrival);
    const double ratio = rate > 0.0 ? c.q.ToDouble() / rate : 1.0;
    ctx.deadlines.push_back(c.tau);
    ctx.arrival_rate.push_back(rate);
    ctx.delivery_ratio.push_back(ratio);
    if (config.mode == TransmissionMode::kFixedRate) {
      const TransmissionBudget b =
          EstimateTransmissions(AverageReliability(config.channel, c), ratio, config.slots_per_period);
      ctx.transmission_budget.push_back(b.transmissions);
      if (b.clamped) {
        ctx.warnings.push_back(fmt::format(
            "client {}: arrival rate {} does not exceed q {}; transmission budget clamped to T", c.id, rate,
            c.q.ToDouble()));
      }
    } else {
      ctx.transmission_budget.push_back(config.slots_per_period);
    }
  }
  return ctx;
}

std::vector<double> WeightedDeliveryKey(const PeriodSnapshot& snapshot, const SchedulingContext& ctx) {
  if (ctx.static_channel) return snapshot.debts.weighted_delivery;
  std::vector<double> key(snapshot.debts.delivery.size(), 0.0);
  for (std::size_t i = 0; i < key.size(); ++i) {
    const double r = snapshot.debts.delivery[i].ToDouble();
    key[i] = ctx.mode == TransmissionMode::kFixedRate ? r / snapshot.reliability[i]
                                                      : r * snapshot.service_time[i];
  }
  return key;
}

Schedule Decide(PolicyId id, const PeriodSnapshot& snapshot, const SchedulingContext& ctx, Rng& rng) {
  if (auto why = CheckCompatibility(id, ctx.mode)) throw std::invalid_argument(*why);
  switch (id) {
    case PolicyId::kRandom:
      return RandomPriority(snapshot.arrivals, rng);
    case PolicyId::kLargestTimeBasedDebt:
      return LargestDebtFirst(snapshot.arrivals, snapshot.debts.time_based);
    case PolicyId::kLargestWeightedDeliveryDebt:
      return LargestDebtFirst(snapshot.arrivals, WeightedDeliveryKey(snapshot, ctx));
    case PolicyId::kModifiedKnapsack:
      return ModifiedKnapsack(snapshot.arrivals, snapshot.debts.delivery, snapshot.service_time, ctx.deadlines,
                              ctx.slots_per_period);
    case PolicyId::kJointDebtChannel:
      return JointDebtChannel(snapshot.arrivals, snapshot.debts.delivery, snapshot.reliability);
    case PolicyId::kAdaptiveAllocation: {
      if (ctx.static_channel) {
        return AdaptiveAllocation(snapshot.arrivals, snapshot.debts.time_based, ctx.transmission_budget,
                                  ctx.deadlines, ctx.slots_per_period);
      }
      std::vector<int> budgets(ctx.deadlines.size());
      for (std::size_t i = 0; i < budgets.size(); ++i) {
        budgets[i] = EstimateTransmissions(snapshot.reliability[i], ctx.delivery_ratio[i], ctx.slots_per_period)
                         .transmissions;
      }
      return AdaptiveAllocation(snapshot.arrivals, snapshot.debts.time_based, budgets, ctx.deadlines,
                                ctx.slots_per_period);
    }
  }
  throw std::logic_error("unknown policy");
}

}  // namespace rtsched
