#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "rtsched/channel.h"
#include "rtsched/model.h"
#include "rtsched/presets.h"
#include "rtsched/traffic.h"
#include "test_util.h"

namespace rtsched {
namespace {

using testing::StaticConfig;

bool HasRule(const std::vector<Diagnostic>& diags, std::string_view rule) {
  return std::any_of(diags.begin(), diags.end(), [&](const Diagnostic& d) { return d.rule == rule; });
}

TEST(ValidateTest, WellFormedTwoClientConfigIsClean) {
  const SystemConfig cfg = StaticConfig(4, {Rational(3, 5), Rational(3, 5)}, {0.5, 0.5});
  EXPECT_TRUE(Validate(cfg).empty());
}

TEST(ValidateTest, TauBeyondPeriod) {
  SystemConfig cfg = StaticConfig(4, {Rational(1, 2)}, {0.5});
  cfg.clients[0].tau = 5;
  const auto diags = Validate(cfg);
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_EQ(diags[0].rule, "tau exceeds period length");
  EXPECT_EQ(diags[0].client, 1);
  EXPECT_EQ(diags[0].field, "tau");
}

TEST(ValidateTest, ZeroQ) {
  SystemConfig cfg = StaticConfig(4, {Rational(0)}, {0.5});
  EXPECT_TRUE(HasRule(Validate(cfg), "q must be positive"));
}

TEST(ValidateTest, BadReliabilityAndIds) {
  SystemConfig cfg = StaticConfig(4, {Rational(1, 2), Rational(1, 2)}, {0.0, 1.5});
  cfg.clients[1].id = 5;
  const auto diags = Validate(cfg);
  EXPECT_TRUE(HasRule(diags, "reliability must lie in (0,1]"));
  EXPECT_EQ(std::count_if(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.field == "id"; }), 1);
}

TEST(ValidateTest, UnservableClientIsOnlyAWarning) {
  SystemConfig cfg = BuildPreset("voip-rate-adaptation", 0.1);
  cfg.clients.back().tau = 2;  // both service times (3, 4) exceed it
  const auto diags = Validate(cfg);
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_EQ(diags[0].severity, Severity::kWarning);
  EXPECT_FALSE(HasErrors(diags));
}

TEST(ValidateTest, IsPure) {
  SystemConfig cfg = StaticConfig(4, {Rational(0), Rational(2)}, {0.5, 2.0});
  EXPECT_EQ(Validate(cfg), Validate(cfg));
}

TEST(ValidateTest, MarkovArrivalChecks) {
  SystemConfig cfg = StaticConfig(4, {Rational(1, 2)}, {0.5});
  cfg.clients[0].arrival = MarkovArrivals{{{"a", 1.2}, {"b", 0.5}}, {{1.0, 0.0}, {0.0, 1.0}}};
  const auto diags = Validate(cfg);
  EXPECT_TRUE(HasRule(diags, "transition matrix must be irreducible"));
  EXPECT_TRUE(HasRule(diags, "arrival probability of 'a' outside [0,1]"));
}

TEST(CheckScheduleTest, RejectsDuplicatesAndStrangers) {
  const std::vector<ClientId> arrivals = {1, 3};
  EXPECT_FALSE(CheckSchedule(PriorityList{{3, 1}}, arrivals, 4));
  EXPECT_TRUE(CheckSchedule(PriorityList{{1, 1}}, arrivals, 4));
  EXPECT_TRUE(CheckSchedule(PriorityList{{2}}, arrivals, 4));
  EXPECT_TRUE(CheckSchedule(SlotAllocation{{1, 0, 3}, {}}, arrivals, 4));
  EXPECT_FALSE(CheckSchedule(SlotAllocation{{1, 0, 3, 0}, {1}}, arrivals, 4));
}

TEST(TrafficTest, PeriodicEveryThirdPeriod) {
  std::vector<ClientSpec> clients(1);
  clients[0].arrival = PeriodicArrivals{3, 1};
  Rng rng(1);
  TrafficProcess traffic(clients, rng);
  for (int k = 0; k < 7; ++k) {
    const bool present = !traffic.NextArrivals(k, rng).empty();
    EXPECT_EQ(present, k == 0 || k == 3 || k == 6) << "k=" << k;
  }
}

TEST(TrafficTest, SaturatedAndOffsetClients) {
  std::vector<ClientSpec> clients(3);
  clients[0].id = 1;
  clients[0].arrival = PeriodicArrivals{1, 1};
  clients[1].id = 2;
  clients[1].arrival = PeriodicArrivals{2, 2};
  clients[2].id = 3;
  clients[2].arrival = PeriodicArrivals{2, 1};
  Rng rng(1);
  TrafficProcess traffic(clients, rng);
  EXPECT_EQ(traffic.NextArrivals(0, rng), (std::vector<ClientId>{1, 3}));
  EXPECT_EQ(traffic.NextArrivals(1, rng), (std::vector<ClientId>{1, 2}));
}

TEST(TrafficTest, GreatStateAlwaysArrives) {
  std::vector<ClientSpec> clients(1);
  clients[0].arrival = MarkovArrivals{{{"Great", 1.0}}, {{1.0}}};
  Rng rng(3);
  TrafficProcess traffic(clients, rng);
  for (int k = 0; k < 1000; ++k) EXPECT_EQ(traffic.NextArrivals(k, rng).size(), 1u);
}

TEST(TrafficTest, ArrivalFrequency) {
  EXPECT_DOUBLE_EQ(ArrivalFrequency(PeriodicArrivals{3, 2}), 1.0 / 3);
  const MarkovArrivals mpeg = std::get<MarkovArrivals>(BuildPreset("mpeg-gilbert-elliot").clients[0].arrival);
  EXPECT_NEAR(ArrivalFrequency(mpeg), 0.85, 1e-12);
  const MarkovArrivals lower = std::get<MarkovArrivals>(BuildPreset("mpeg-gilbert-elliot").clients.back().arrival);
  EXPECT_NEAR(ArrivalFrequency(lower), 0.68, 1e-12);
}

TEST(ChannelTest, StaticIsConstant) {
  Rng rng(1);
  ChannelProcess process(StaticChannel{}, 3, rng);
  for (int k = 0; k < 10; ++k) EXPECT_EQ(process.Next(rng).per_client, (std::vector<int>{0, 0, 0}));
}

TEST(ChannelTest, AverageReliabilityExamples) {
  ClientSpec c;
  c.channel_values = {0.9};
  EXPECT_DOUBLE_EQ(AverageReliability(StaticChannel{}, c), 0.9);

  // Stay good w.p. 0.8, bad lasts one period: pi = (5/6, 1/6).
  c.channel_values = {1.0, 0.2};
  const PerClientTwoStateChannel two{{{5.0, 1.0}}};
  EXPECT_NEAR(AverageReliability(two, c), 1.0 * 5 / 6 + 0.2 / 6, 1e-12);
  EXPECT_NEAR(AverageReliability(two, c), 0.8667, 5e-5);

  const SystemConfig ge = BuildPreset("voip-gilbert-elliot");
  for (int n = 1; n <= 19; ++n) {
    const auto idx = static_cast<std::size_t>(n - 1);
    EXPECT_NEAR(AverageReliability(ge.channel, ge.clients[idx]), (2.2 + n) / (3.0 + n), 1e-12) << n;
  }
  EXPECT_NEAR(AverageReliability(ge.channel, ge.clients[0]), 0.8, 1e-12);
}

TEST(ChannelTest, ReducibleGlobalChainThrows) {
  const GlobalMarkovChannel g{{"a", "b"}, {{1.0, 0.0}, {0.0, 1.0}}};
  ClientSpec c;
  c.channel_values = {1.0, 0.5};
  EXPECT_THROW(AverageReliability(g, c), ReducibleChainError);
}

TEST(ChannelTest, GilbertElliotValuesAndLongRunReliability) {
  const SystemConfig ge = BuildPreset("voip-gilbert-elliot", 3.0 / 19);  // three clients per subgroup
  Rng rng(11, Stream::kChannel);
  ChannelProcess process(ge.channel, ge.num_clients(), rng);
  const std::int64_t periods = 1000000;
  std::vector<double> sum(3, 0.0);
  for (std::int64_t k = 0; k < periods; ++k) {
    const ChannelState cs = process.Next(rng);
    for (std::size_t i = 0; i < 3; ++i) {
      const double p = ge.clients[i].channel_values[static_cast<std::size_t>(cs.per_client[i])];
      ASSERT_TRUE(p == 1.0 || p == 0.2);
      sum[i] += p;
    }
  }
  const auto& sojourns = std::get<PerClientTwoStateChannel>(ge.channel).sojourns;
  for (std::size_t i = 0; i < 3; ++i) {
    const int n = static_cast<int>(i) + 1;
    const double expected = (2.2 + n) / (3.0 + n);
    const double sigma = std::sqrt(AsymptoticVariance(TwoStateTransition(sojourns[i]), std::vector<double>{1.0, 0.2}) / periods);
    EXPECT_NEAR(sum[i] / periods, expected, 3 * sigma) << "client " << n;
  }
}

}  // namespace
}  // namespace rtsched
