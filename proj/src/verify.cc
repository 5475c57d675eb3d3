#include "rtsched/verify.h"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "rtsched/analysis.h"
#include "rtsched/channel.h"
#include "rtsched/engine.h"
#include "rtsched/policies.h"
#include "rtsched/presets.h"
#include "rtsched/rng.h"
#include "rtsched/traffic.h"

namespace rtsched {
namespace {

constexpr std::array<std::string_view, 6> kSuites = {"knapsack", "ordering", "swap", "payoff", "frequencies",
                                                     "feasibility"};

int Uniform(Rng& rng, int lo, int hi) { return lo + static_cast<int>(rng.Below(static_cast<std::uint64_t>(hi - lo + 1))); }
double Uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.Uniform(); }

std::vector<ClientId> RandomArrivals(Rng& rng, int n, double presence) {
  std::vector<ClientId> out;
  for (ClientId id = 1; id <= n; ++id) {
    if (rng.Bernoulli(presence)) out.push_back(id);
  }
  return out;
}

// Records the first failure only; later ones are just counted.
struct Tally {
  SuiteResult& result;
  void Check(bool ok, const std::function<std::string()>& describe) {
    ++result.checks;
    if (ok) return;
    if (result.failures++ == 0) result.detail = describe();
  }
};

std::string Join(std::span<const ClientId> ids) {
  return fmt::format("[{}]", fmt::join(ids.begin(), ids.end(), ","));
}

void KnapsackSuite(const VerifyOptions& opt, Rng& rng, SuiteResult& res) {
  Tally tally{res};
  const KnapsackSolver solver = opt.knapsack ? opt.knapsack : KnapsackSolver(ModifiedKnapsack);
  for (int inst = 0; inst < opt.knapsack_instances; ++inst) {
    const int n = Uniform(rng, 1, 8);
    const int slots = Uniform(rng, 1, 12);
    std::vector<Rational> debts;
    std::vector<int> service, deadlines;
    for (int i = 0; i < n; ++i) {
      debts.emplace_back(Uniform(rng, -6, 20), Uniform(rng, 1, 6));
      service.push_back(Uniform(rng, 1, slots));
      deadlines.push_back(Uniform(rng, 1, slots));
    }
    const std::vector<ClientId> arrivals = RandomArrivals(rng, n, 0.85);
    const OrderedSubset got = solver(arrivals, debts, service, deadlines, slots);
    const SubsetResult want = KnapsackOracle(arrivals, debts, service, deadlines);

    Rational sum;
    for (ClientId id : got.order) sum += debts[Index(id)].PositivePart();
    const bool consistent = sum == got.value && IsEdfFeasible(got.order, service, deadlines) &&
                            !CheckSchedule(Schedule{got}, arrivals, slots);
    tally.Check(got.value == want.value && consistent, [&] {
      return fmt::format("instance {}: solver value {} subset {}, oracle value {} subset {}", inst,
                         got.value.ToString(), Join(got.order), want.value.ToString(), Join(want.subset));
    });
  }
}

struct OrderingInstance {
  int slots = 1;
  std::vector<Rational> debts;
  std::vector<double> debt_values;
  std::vector<double> reliability;
  std::vector<int> deadlines;
  std::vector<ClientId> arrivals;
};

OrderingInstance RandomOrderingInstance(Rng& rng, int max_clients, int max_slots) {
  OrderingInstance in;
  const int n = Uniform(rng, 1, max_clients);
  in.slots = Uniform(rng, 1, max_slots);
  for (int i = 0; i < n; ++i) {
    in.debts.emplace_back(Uniform(rng, -5, 20), Uniform(rng, 1, 8));
    in.reliability.push_back(Uniform(rng, 1, 20) / 20.0);
    // Occasionally clone another client's debt-reliability product.
    if (i > 0 && rng.Bernoulli(0.15)) {
      in.debts.back() = in.debts[0];
      in.reliability.back() = in.reliability[0];
    }
    in.deadlines.push_back(in.slots);
  }
  for (const Rational& r : in.debts) in.debt_values.push_back(r.ToDouble());
  in.arrivals = RandomArrivals(rng, n, 0.85);
  return in;
}

void OrderingSuite(const VerifyOptions& opt, Rng& rng, SuiteResult& res) {
  Tally tally{res};
  for (int inst = 0; inst < opt.ordering_instances; ++inst) {
    const OrderingInstance in = RandomOrderingInstance(rng, 6, 8);
    const PriorityList jdc = JointDebtChannel(in.arrivals, in.debts, in.reliability);
    const double got = ExactPayoff(jdc.order, in.debt_values, in.reliability, in.deadlines, in.slots);
    const OrderingResult best =
        BruteForceBestOrdering(in.arrivals, in.debt_values, in.reliability, in.deadlines, in.slots);
    tally.Check(std::abs(got - best.payoff) <= 1e-9, [&] {
      return fmt::format("instance {}: joint-debt-channel {} payoff {:.12g}, best {} payoff {:.12g}", inst,
                         Join(jdc.order), got, Join(best.ordering), best.payoff);
    });
  }
}

void SwapSuite(const VerifyOptions& opt, Rng& rng, SuiteResult& res) {
  Tally tally{res};
  for (int inst = 0; inst < opt.swap_instances; ++inst) {
    const int n = Uniform(rng, 2, 6);
    const int slots = Uniform(rng, n, 8);
    std::vector<double> debts(static_cast<std::size_t>(n)), rel(static_cast<std::size_t>(n));
    const std::vector<int> deadlines(static_cast<std::size_t>(n), slots);
    for (int i = 0; i < n; ++i) {
      debts[static_cast<std::size_t>(i)] = Uniform(rng, 0.1, 5.0);
      rel[static_cast<std::size_t>(i)] = Uniform(rng, 0.05, 0.95);
    }
    std::vector<ClientId> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i + 1;
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.Below(i)]);
    const auto m = static_cast<std::size_t>(Uniform(rng, 0, n - 2));
    const std::size_t a = Index(order[m]);
    const std::size_t b = Index(order[m + 1]);
    const bool tie = rng.Bernoulli(0.2);
    // Tie: give the second client exactly the same product, up to rounding.
    if (tie) debts[b] = debts[a] * rel[a] / rel[b];

    std::vector<ClientId> swapped = order;
    std::swap(swapped[m], swapped[m + 1]);
    const double diff = ExactPayoff(order, debts, rel, deadlines, slots) -
                        ExactPayoff(swapped, debts, rel, deadlines, slots);
    const double product_gap = debts[a] * rel[a] - debts[b] * rel[b];
    if (tie) {
      tally.Check(std::abs(diff) <= 1e-12, [&] { return fmt::format("instance {}: tie but difference {:.3g}", inst, diff); });
    } else {
      const bool same_sign = (diff > 0.0) == (product_gap > 0.0) && diff != 0.0;
      tally.Check(same_sign, [&] {
        return fmt::format("instance {}: payoff difference {:.6g} vs product gap {:.6g}", inst, diff, product_gap);
      });
    }
  }
}

void PayoffSuite(const VerifyOptions& opt, Rng& rng, SuiteResult& res) {
  Tally tally{res};
  Rng mc(opt.seed, Stream::kTransmission);
  for (int inst = 0; inst < opt.payoff_instances; ++inst) {
    OrderingInstance in = RandomOrderingInstance(rng, 6, 8);
    for (int& tau : in.deadlines) tau = Uniform(rng, 1, in.slots);
    for (double& p : in.reliability) p = Uniform(rng, 0.05, 1.0);
    std::vector<ClientId> order = in.arrivals;
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.Below(i)]);
    const double exact = ExactPayoff(order, in.debt_values, in.reliability, in.deadlines, in.slots);
    const MonteCarloEstimate est =
        SimulatePayoff(order, in.debt_values, in.reliability, in.deadlines, in.slots, opt.payoff_trials, mc);
    tally.Check(std::abs(est.mean - exact) <= 3.0 * est.std_error + 1e-12, [&] {
      return fmt::format("instance {}: exact {:.6f}, Monte Carlo {:.6f} +- {:.6f}", inst, exact, est.mean,
                         est.std_error);
    });
  }
}

// 3-sigma band for a long-run frequency estimated from one stationary path.
bool WithinBand(double empirical, double expected, double asymptotic_variance, std::int64_t periods) {
  const double se = std::sqrt(std::max(asymptotic_variance, 0.0) / static_cast<double>(periods));
  return std::abs(empirical - expected) <= 3.0 * se + 1e-12;
}

Matrix RandomIrreducible(Rng& rng, int states) {
  Matrix m(static_cast<std::size_t>(states), std::vector<double>(static_cast<std::size_t>(states)));
  for (auto& row : m) {
    double sum = 0.0;
    for (double& v : row) sum += (v = Uniform(rng, 0.05, 1.0));
    for (double& v : row) v /= sum;
  }
  return m;
}

void FrequencySuite(const VerifyOptions& opt, Rng& rng, SuiteResult& res) {
  Tally tally{res};
  const std::int64_t periods = opt.frequency_periods;

  // Arrivals: the MPEG activity chains plus two random chains.
  SystemConfig traffic_cfg = BuildPreset("mpeg-gilbert-elliot", 0.5);
  for (int extra = 0; extra < 2; ++extra) {
    ClientSpec c;
    c.id = traffic_cfg.num_clients() + 1;
    MarkovArrivals m;
    const int states = Uniform(rng, 2, 4);
    for (int s = 0; s < states; ++s) m.states.push_back({fmt::format("s{}", s), Uniform(rng, 0.1, 1.0)});
    m.transition = RandomIrreducible(rng, states);
    c.arrival = std::move(m);
    c.channel_values = {1.0, 0.2};
    traffic_cfg.clients.push_back(std::move(c));
  }
  {
    Rng arrivals(opt.seed, Stream::kArrival);
    TrafficProcess traffic(traffic_cfg.clients, arrivals);
    std::vector<std::int64_t> counts(traffic_cfg.clients.size(), 0);
    for (std::int64_t k = 0; k < periods; ++k) {
      for (ClientId id : traffic.NextArrivals(k, arrivals)) ++counts[Index(id)];
    }
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const auto& m = std::get<MarkovArrivals>(traffic_cfg.clients[i].arrival);
      std::vector<double> f;
      for (const auto& s : m.states) f.push_back(s.arrival_probability);
      const std::vector<double> pi = StationaryDistribution(m.transition);
      double bernoulli_noise = 0.0;
      for (std::size_t s = 0; s < f.size(); ++s) bernoulli_noise += pi[s] * f[s] * (1.0 - f[s]);
      const double expected = ArrivalFrequency(m);
      const double empirical = static_cast<double>(counts[i]) / static_cast<double>(periods);
      tally.Check(WithinBand(empirical, expected, AsymptoticVariance(m.transition, f) + bernoulli_noise, periods),
                  [&] {
                    return fmt::format("arrival client {}: empirical {:.5f}, stationary {:.5f}", i + 1, empirical,
                                       expected);
                  });
    }
  }

  // Channels: per-client Gilbert-Elliot chains and a random global chain.
  auto check_channel = [&](const ChannelModel& model, int clients, std::string_view what) {
    Rng chan(opt.seed, Stream::kChannel);
    ChannelProcess process(model, clients, chan);
    const int states = ChannelStateCount(model);
    std::vector<std::vector<std::int64_t>> occupancy(static_cast<std::size_t>(clients),
                                                     std::vector<std::int64_t>(static_cast<std::size_t>(states)));
    for (std::int64_t k = 0; k < periods; ++k) {
      const ChannelState cs = process.Next(chan);
      for (int i = 0; i < clients; ++i) {
        ++occupancy[static_cast<std::size_t>(i)][static_cast<std::size_t>(cs.per_client[static_cast<std::size_t>(i)])];
      }
    }
    for (int i = 0; i < clients; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      const std::vector<double> pi = ChannelStationary(model, idx);
      const Matrix transition = std::holds_alternative<PerClientTwoStateChannel>(model)
                                    ? TwoStateTransition(std::get<PerClientTwoStateChannel>(model).sojourns[idx])
                                    : std::get<GlobalMarkovChannel>(model).transition;
      for (int s = 0; s < states; ++s) {
        std::vector<double> indicator(static_cast<std::size_t>(states), 0.0);
        indicator[static_cast<std::size_t>(s)] = 1.0;
        const double empirical =
            static_cast<double>(occupancy[idx][static_cast<std::size_t>(s)]) / static_cast<double>(periods);
        tally.Check(WithinBand(empirical, pi[static_cast<std::size_t>(s)],
                               AsymptoticVariance(transition, indicator), periods),
                    [&] {
                      return fmt::format("{} channel client {} state {}: empirical {:.5f}, stationary {:.5f}", what,
                                         i + 1, s, empirical, pi[static_cast<std::size_t>(s)]);
                    });
        if (states == 2) break;  // the other state is the complement
      }
    }
  };
  const SystemConfig ge = BuildPreset("voip-gilbert-elliot", 0.2);
  check_channel(ge.channel, ge.num_clients(), "two-state");
  GlobalMarkovChannel global;
  global.labels = {"a", "b", "c"};
  global.transition = RandomIrreducible(rng, 3);
  check_channel(global, 1, "global");
}

SystemConfig RandomStaticConfig(Rng& rng) {
  SystemConfig cfg;
  cfg.name = "random-static";
  cfg.slots_per_period = Uniform(rng, 2, 6);
  cfg.mode = TransmissionMode::kFixedRate;
  cfg.channel = StaticChannel{};
  const int n = Uniform(rng, 2, 4);
  for (int i = 1; i <= n; ++i) {
    ClientSpec c;
    c.id = i;
    c.tau = cfg.slots_per_period;
    const int interval = Uniform(rng, 1, 3);
    c.arrival = PeriodicArrivals{interval, Uniform(rng, 1, interval)};
    c.channel_values = {Uniform(rng, 8, 20) / 20.0};
    // q = u / interval with u on a grid of twentieths in [0.2, 1].
    c.q = Rational(Uniform(rng, 4, 20), 20 * interval);
    cfg.clients.push_back(std::move(c));
  }
  return cfg;
}

void FeasibilitySuite(const VerifyOptions& opt, Rng& rng, SuiteResult& res) {
  Tally tally{res};
  const std::int64_t periods = opt.fulfillment_periods;
  const auto window = static_cast<std::size_t>(periods / 2);
  int feasible = 0;
  int infeasible = 0;
  for (int attempt = 0; attempt < 100000 && (feasible < opt.feasible_instances || infeasible < opt.infeasible_instances);
       ++attempt) {
    SystemConfig cfg = RandomStaticConfig(rng);
    cfg.seed = rng.Below(1u << 30);
    const FeasibilityReport report = FeasibilityTest(cfg);
    const bool want_feasible =
        report.verdict == Verdict::kStrictlyFeasible && report.min_relative_margin >= 0.2;
    const bool want_infeasible = report.verdict == Verdict::kInfeasible && report.min_relative_margin <= -0.1;
    if (want_feasible && feasible >= opt.feasible_instances) continue;
    if (want_infeasible && infeasible >= opt.infeasible_instances) continue;
    if (!want_feasible && !want_infeasible) continue;

    RunOptions run;
    run.periods = periods;
    const MetricsSeries series = RunSimulation(cfg, PolicyId::kJointDebtChannel, run);
    const auto verdicts = FulfillmentCheck(series, window);
    const bool all_fulfilled =
        std::all_of(verdicts.begin(), verdicts.end(), [](const FulfillmentVerdict& v) { return v.fulfilled; });
    double worst_rate = 0.0;
    for (const Rational& r : series.periods.back().delivery_debt) {
      worst_rate = std::max(worst_rate, r.PositivePart().ToDouble() / static_cast<double>(periods));
    }
    if (want_feasible) {
      ++feasible;
      tally.Check(all_fulfilled && worst_rate < 1e-2, [&] {
        return fmt::format("feasible instance (margin {:.3f}) not fulfilled: worst r+/K {:.4g}",
                           report.min_relative_margin, worst_rate);
      });
    } else {
      ++infeasible;
      tally.Check(!all_fulfilled, [&] {
        return fmt::format("infeasible instance (margin {:.3f}) looks fulfilled", report.min_relative_margin);
      });
    }
  }
  tally.Check(feasible == opt.feasible_instances && infeasible == opt.infeasible_instances, [&] {
    return fmt::format("only generated {} feasible and {} infeasible instances", feasible, infeasible);
  });
}

}  // namespace

std::span<const std::string_view> SuiteNames() { return kSuites; }

SuiteResult RunSuite(std::string_view name, const VerifyOptions& options) {
  SuiteResult res;
  res.name = std::string(name);
  // Each suite has its own generator so suites give the same instances
  // whether run alone or together.
  const auto suite_index = static_cast<std::uint64_t>(std::find(kSuites.begin(), kSuites.end(), name) - kSuites.begin());
  if (suite_index == kSuites.size()) throw std::invalid_argument(fmt::format("unknown suite '{}'", name));
  Rng rng(SplitMix64(options.seed + 0x100 * (suite_index + 1)));

  const auto start = std::chrono::steady_clock::now();
  try {
    if (name == "knapsack") KnapsackSuite(options, rng, res);
    if (name == "ordering") OrderingSuite(options, rng, res);
    if (name == "swap") SwapSuite(options, rng, res);
    if (name == "payoff") PayoffSuite(options, rng, res);
    if (name == "frequencies") FrequencySuite(options, rng, res);
    if (name == "feasibility") FeasibilitySuite(options, rng, res);
  } catch (const std::exception& e) {
    ++res.failures;
    res.detail = fmt::format("error: {}", e.what());
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  res.passed = res.failures == 0;
  if (res.passed) res.detail = fmt::format("{} checks", res.checks);
  return res;
}

std::vector<SuiteResult> RunAllSuites(const VerifyOptions& options) {
  std::vector<SuiteResult> out;
  for (std::string_view name : kSuites) out.push_back(RunSuite(name, options));
  return out;
}

std::string FormatSuiteTable(std::span<const SuiteResult> results) {
  std::string out = fmt::format("{:<12} {:<5} {:>7} {:>8} {:>8}  {}\n", "suite", "", "checks", "failures", "seconds",
                                "detail");
  for (const SuiteResult& r : results) {
    out += fmt::format("{:<12} {:<5} {:>7} {:>8} {:>8.2f}  {}\n", r.name, r.passed ? "PASS" : "FAIL", r.checks,
                       r.failures, r.seconds, r.detail);
  }
  return out;
}

}  // namespace rtsched
