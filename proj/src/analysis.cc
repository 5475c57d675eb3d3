#include "rtsched/analysis.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "rtsched/engine.h"
#include "rtsched/traffic.h"

namespace rtsched {

double ExactPayoff(std::span<const ClientId> ordering, std::span<const double> debts,
                   std::span<const double> reliability, std::span<const int> deadlines, int slots_per_period) {
  const auto width = static_cast<std::size_t>(slots_per_period) + 1;
  // resolved[t]: probability that every client so far is done (delivered or
  // expired) after exactly t slots.
  std::vector<double> resolved(width, 0.0);
  resolved[0] = 1.0;
  double payoff = 0.0;
  for (ClientId id : ordering) {
    const double p = reliability[Index(id)];
    const int tau = std::min(deadlines[Index(id)], slots_per_period);
    std::vector<double> next(width, 0.0);
    double delivered = 0.0;
    for (int t = 0; t < static_cast<int>(width); ++t) {
      const double mass = resolved[static_cast<std::size_t>(t)];
      if (mass == 0.0) continue;
      if (t >= tau) {
        next[static_cast<std::size_t>(t)] += mass;
        continue;
      }
      double all_failed = mass;
      for (int finish = t + 1; finish <= tau; ++finish) {
        const double success = all_failed * p;
        next[static_cast<std::size_t>(finish)] += success;
        delivered += success;
        all_failed -= success;
      }
      next[static_cast<std::size_t>(tau)] += all_failed;
    }
    payoff += std::max(debts[Index(id)], 0.0) * delivered;
    resolved = std::move(next);
  }
  return payoff;
}

OrderingResult BruteForceBestOrdering(std::span<const ClientId> arrivals, std::span<const double> debts,
                                      std::span<const double> reliability, std::span<const int> deadlines,
                                      int slots_per_period) {
  std::vector<ClientId> perm;
  for (ClientId id : arrivals) {
    if (debts[Index(id)] > 0.0) perm.push_back(id);
  }
  if (perm.size() > static_cast<std::size_t>(kOracleClientLimit)) throw OracleLimitError();
  std::sort(perm.begin(), perm.end());
  OrderingResult best{perm, ExactPayoff(perm, debts, reliability, deadlines, slots_per_period)};
  while (std::next_permutation(perm.begin(), perm.end())) {
    const double v = ExactPayoff(perm, debts, reliability, deadlines, slots_per_period);
    if (v > best.payoff + 1e-12 * std::max(1.0, std::abs(best.payoff))) best = {perm, v};
  }
  return best;
}

MonteCarloEstimate SimulatePayoff(std::span<const ClientId> ordering, std::span<const double> debts,
                                  std::span<const double> reliability, std::span<const int> deadlines,
                                  int slots_per_period, std::int64_t trials, Rng& rng) {
  PeriodSnapshot snap;
  snap.arrivals.assign(ordering.begin(), ordering.end());
  std::sort(snap.arrivals.begin(), snap.arrivals.end());
  snap.reliability.assign(reliability.begin(), reliability.end());
  const Schedule schedule = PriorityList{std::vector<ClientId>(ordering.begin(), ordering.end())};
  const PeriodLimits limits{slots_per_period, deadlines, false};
  std::vector<double> uniforms(static_cast<std::size_t>(slots_per_period));

  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::int64_t i = 0; i < trials; ++i) {
    for (double& u : uniforms) u = rng.Uniform();
    const PeriodOutcome out = RunPeriodFixedRate(snap, schedule, limits, uniforms);
    double value = 0.0;
    for (ClientId id : ordering) {
      if (out.clients[Index(id)].delivered) value += std::max(debts[Index(id)], 0.0);
    }
    sum += value;
    sum_sq += value * value;
  }
  MonteCarloEstimate est;
  est.trials = trials;
  est.mean = sum / static_cast<double>(trials);
  const double var = std::max(sum_sq / static_cast<double>(trials) - est.mean * est.mean, 0.0);
  est.std_error = std::sqrt(var / static_cast<double>(trials));
  return est;
}

bool IsEdfFeasible(std::span<const ClientId> subset, std::span<const int> service_times,
                   std::span<const int> deadlines) {
  std::vector<ClientId> order(subset.begin(), subset.end());
  std::sort(order.begin(), order.end(), [&](ClientId a, ClientId b) {
    return deadlines[Index(a)] != deadlines[Index(b)] ? deadlines[Index(a)] < deadlines[Index(b)] : a < b;
  });
  int elapsed = 0;
  for (ClientId id : order) {
    elapsed += service_times[Index(id)];
    if (elapsed > deadlines[Index(id)]) return false;
  }
  return true;
}

SubsetResult KnapsackOracle(std::span<const ClientId> arrivals, std::span<const Rational> debts,
                            std::span<const int> service_times, std::span<const int> deadlines) {
  if (arrivals.size() > static_cast<std::size_t>(kOracleClientLimit)) throw OracleLimitError();
  SubsetResult best;
  const std::uint32_t subsets = 1u << arrivals.size();
  for (std::uint32_t mask = 1; mask < subsets; ++mask) {
    std::vector<ClientId> chosen;
    Rational value;
    for (std::size_t i = 0; i < arrivals.size(); ++i) {
      if (mask & (1u << i)) {
        chosen.push_back(arrivals[i]);
        value += debts[Index(arrivals[i])].PositivePart();
      }
    }
    if (value > best.value && IsEdfFeasible(chosen, service_times, deadlines)) {
      std::sort(chosen.begin(), chosen.end(), [&](ClientId a, ClientId b) {
        return deadlines[Index(a)] != deadlines[Index(b)] ? deadlines[Index(a)] < deadlines[Index(b)] : a < b;
      });
      best = {std::move(chosen), value};
    }
  }
  return best;
}

const char* VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kStrictlyFeasible:
      return "strictly-feasible";
    case Verdict::kInfeasible:
      return "infeasible";
    case Verdict::kInconclusive:
      return "inconclusive";
  }
  return "?";
}

namespace {

// pmf of the number of attempts to the first success, truncated at cap.
std::vector<double> GeometricPmf(double p, int cap) {
  std::vector<double> pmf(static_cast<std::size_t>(cap) + 1, 0.0);
  double fail = 1.0;
  for (int j = 1; j <= cap; ++j) {
    pmf[static_cast<std::size_t>(j)] = fail * p;
    fail *= 1.0 - p;
  }
  return pmf;
}

// E[max(0, T - sum_{n in mask} G_n)] for every mask, G_n geometric(p_n).
std::vector<double> ExactIdleByMask(std::span<const double> reliability, int slots) {
  const std::size_t n = reliability.size();
  const auto width = static_cast<std::size_t>(slots) + 1;
  std::vector<std::vector<double>> pmfs;
  for (double p : reliability) pmfs.push_back(GeometricPmf(p, slots));

  const std::uint32_t masks = 1u << n;
  std::vector<std::vector<double>> dist(masks);
  std::vector<double> idle(masks, 0.0);
  dist[0].assign(width, 0.0);
  dist[0][0] = 1.0;
  idle[0] = slots;
  for (std::uint32_t mask = 1; mask < masks; ++mask) {
    const auto low = static_cast<std::size_t>(std::countr_zero(mask));
    const std::vector<double>& base = dist[mask & (mask - 1)];
    std::vector<double> d(width, 0.0);
    for (std::size_t a = 0; a < width; ++a) {
      if (base[a] == 0.0) continue;
      for (std::size_t b = 1; a + b < width; ++b) d[a + b] += base[a] * pmfs[low][b];
    }
    double e = 0.0;
    for (std::size_t j = 0; j < width; ++j) e += d[j] * static_cast<double>(slots - static_cast<int>(j));
    idle[mask] = e;
    dist[mask] = std::move(d);
  }
  return idle;
}

}  // namespace

FeasibilityReport FeasibilityTest(const SystemConfig& config, const FeasibilityOptions& options) {
  if (config.mode != TransmissionMode::kFixedRate) throw std::invalid_argument("feasibility test needs fixed-rate mode");
  if (!IsStaticChannel(config.channel)) throw std::invalid_argument("feasibility test needs a static channel");
  if (config.num_clients() < 1 || config.num_clients() > 15) {
    throw std::invalid_argument("feasibility test supports 1..15 clients");
  }
  for (const auto& c : config.clients) {
    if (c.tau != config.slots_per_period) {
      throw std::invalid_argument("feasibility test needs every deadline equal to the period length");
    }
  }
  const std::size_t n = config.clients.size();
  const int slots = config.slots_per_period;
  const std::uint32_t masks = 1u << n;
  std::vector<double> p(n), w(n);
  bool all_periodic = true;
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = config.clients[i].channel_values[0];
    w[i] = config.clients[i].q.ToDouble() / p[i];
    all_periodic = all_periodic && std::holds_alternative<PeriodicArrivals>(config.clients[i].arrival);
  }

  FeasibilityReport report;
  report.subsets.resize(masks);
  std::vector<double> idle_mean(masks, 0.0), idle_hw(masks, 0.0);

  if (all_periodic && !options.force_monte_carlo) {
    report.exact = true;
    std::int64_t cycle = 1;
    for (const auto& c : config.clients) cycle = std::lcm(cycle, std::get<PeriodicArrivals>(c.arrival).interval);
    const std::vector<double> idle_by_mask = ExactIdleByMask(p, slots);
    for (std::int64_t k = 0; k < cycle; ++k) {
      std::uint32_t present = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto& a = std::get<PeriodicArrivals>(config.clients[i].arrival);
        if (k % a.interval == a.offset - 1) present |= 1u << i;
      }
      for (std::uint32_t mask = 0; mask < masks; ++mask) idle_mean[mask] += idle_by_mask[mask & present];
    }
    for (double& v : idle_mean) v /= static_cast<double>(cycle);
  } else {
    Rng rng(options.seed, Stream::kEstimator);
    TrafficProcess traffic(config.clients, rng);
    std::vector<double> sum(masks, 0.0), sum_sq(masks, 0.0);
    std::vector<int> busy(masks, 0);
    std::vector<int> attempts(n);
    for (std::int64_t k = 0; k < options.monte_carlo_periods; ++k) {
      std::uint32_t present = 0;
      for (ClientId id : traffic.NextArrivals(k, rng)) present |= 1u << Index(id);
      for (std::size_t i = 0; i < n; ++i) {
        attempts[i] = (present >> i) & 1u ? rng.Geometric(p[i], slots) : 0;
      }
      busy[0] = 0;
      for (std::uint32_t mask = 1; mask < masks; ++mask) {
        const auto low = static_cast<std::size_t>(std::countr_zero(mask));
        busy[mask] = std::min(slots, busy[mask & (mask - 1)] + attempts[low]);
      }
      for (std::uint32_t mask = 0; mask < masks; ++mask) {
        const double idle = slots - busy[mask];
        sum[mask] += idle;
        sum_sq[mask] += idle * idle;
      }
    }
    const auto periods = static_cast<double>(options.monte_carlo_periods);
    for (std::uint32_t mask = 0; mask < masks; ++mask) {
      idle_mean[mask] = sum[mask] / periods;
      const double var = std::max(sum_sq[mask] / periods - idle_mean[mask] * idle_mean[mask], 0.0);
      idle_hw[mask] = options.z * std::sqrt(var / periods);
    }
  }

  bool all_clear = true;
  bool any_violated = false;
  report.min_relative_margin = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < masks; ++mask) {
    SubsetRow& row = report.subsets[mask];
    row.members = mask;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) row.workload += w[i];
    }
    row.idle_mean = idle_mean[mask];
    row.idle_half_width = idle_hw[mask];
    row.margin = slots - row.idle_mean - row.workload;
    if (mask == 0) continue;
    if (!(row.margin > row.idle_half_width)) all_clear = false;
    if (row.margin < -row.idle_half_width) any_violated = true;
    const double capacity = slots - row.idle_mean;
    const double relative = capacity > 0.0 ? row.margin / capacity : -std::numeric_limits<double>::infinity();
    report.min_relative_margin = std::min(report.min_relative_margin, relative);
  }
  report.verdict = all_clear ? Verdict::kStrictlyFeasible
                             : (any_violated ? Verdict::kInfeasible : Verdict::kInconclusive);
  return report;
}

double LeastSquaresSlope(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  const double x_mean = (static_cast<double>(n) - 1.0) / 2.0;
  const double y_mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = static_cast<double>(i) - x_mean;
    sxy += dx * (values[i] - y_mean);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

std::vector<FulfillmentVerdict> FulfillmentCheck(const MetricsSeries& series, std::size_t window,
                                                 double tolerance) {
  if (window == 0 || series.periods.size() < 2 * window) {
    throw std::invalid_argument(
        fmt::format("fulfillment check needs at least {} periods, series has {}", 2 * window, series.periods.size()));
  }
  std::vector<FulfillmentVerdict> out;
  const std::size_t total = series.periods.size();
  for (int c = 0; c < series.num_clients; ++c) {
    std::vector<double> tail;
    tail.reserve(window);
    for (std::size_t k = total - window; k < total; ++k) {
      tail.push_back(series.periods[k].delivery_debt[static_cast<std::size_t>(c)].PositivePart().ToDouble());
    }
    FulfillmentVerdict v;
    v.client = c + 1;
    v.slope = LeastSquaresSlope(tail);
    v.debt_rate = tail.back() / static_cast<double>(total);
    v.fulfilled = v.slope < tolerance && v.debt_rate < tolerance;
    out.push_back(v);
  }
  return out;
}

}  // namespace rtsched
