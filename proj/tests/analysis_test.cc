#include <cmath>

#include <gtest/gtest.h>

#include "rtsched/analysis.h"
#include "rtsched/engine.h"
#include "test_util.h"

namespace rtsched {
namespace {

using testing::StaticConfig;

TEST(ExactPayoffTest, Examples) {
  const std::vector<ClientId> one = {1};
  const std::vector<int> tau2 = {2};
  EXPECT_NEAR(ExactPayoff(one, std::vector<double>{1.0}, std::vector<double>{0.5}, tau2, 2), 0.75, 1e-15);
  EXPECT_EQ(ExactPayoff(one, std::vector<double>{0.0}, std::vector<double>{0.5}, tau2, 2), 0.0);
  const std::vector<ClientId> two = {1, 2};
  const std::vector<int> tau = {2, 2};
  EXPECT_NEAR(ExactPayoff(two, std::vector<double>{1, 1}, std::vector<double>{1, 1}, tau, 2), 2.0, 1e-15);
}

TEST(ExactPayoffTest, ClosedFormTwoClients) {
  // Order [1,2], T = 3: client 2 is delivered iff client 1 succeeds at
  // attempt j and client 2 within the remaining 3 - j slots.
  const double p1 = 0.3, p2 = 0.6;
  const std::vector<ClientId> order = {1, 2};
  const std::vector<int> tau = {3, 3};
  const double d1 = 1 - std::pow(1 - p1, 3);
  const double d2 = p1 * (1 - std::pow(1 - p2, 2)) + (1 - p1) * p1 * p2;
  EXPECT_NEAR(ExactPayoff(order, std::vector<double>{2, 1}, std::vector<double>{p1, p2}, tau, 3), 2 * d1 + d2, 1e-14);
}

TEST(BruteForceTest, Examples) {
  const std::vector<ClientId> two = {1, 2};
  const std::vector<int> tau = {3, 3};
  const OrderingResult best =
      BruteForceBestOrdering(two, std::vector<double>{2, 1}, std::vector<double>{0.3, 0.9}, tau, 3);
  EXPECT_EQ(best.ordering, (std::vector<ClientId>{2, 1}));
  const std::vector<ClientId> one = {1};
  EXPECT_EQ(BruteForceBestOrdering(one, std::vector<double>{1}, std::vector<double>{0.5}, std::vector<int>{3}, 3).ordering,
            one);
  const OrderingResult none =
      BruteForceBestOrdering(two, std::vector<double>{0, -1}, std::vector<double>{0.3, 0.9}, tau, 3);
  EXPECT_TRUE(none.ordering.empty());
  EXPECT_EQ(none.payoff, 0.0);
}

TEST(BruteForceTest, GuardsSize) {
  std::vector<ClientId> many;
  for (ClientId id = 1; id <= 9; ++id) many.push_back(id);
  const std::vector<double> ones(9, 1.0);
  const std::vector<int> tau(9, 4);
  try {
    BruteForceBestOrdering(many, ones, ones, tau, 4);
    FAIL();
  } catch (const OracleLimitError& e) {
    EXPECT_STREQ(e.what(), "oracle limited to 8 clients");
  }
  EXPECT_THROW(KnapsackOracle(many, std::vector<Rational>(9, Rational(1)), tau, tau), OracleLimitError);
}

TEST(BruteForceTest, BestPayoffDominatesEveryOrdering) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.Below(5));
    const int slots = 1 + static_cast<int>(rng.Below(6));
    std::vector<ClientId> order;
    std::vector<double> debts, rel;
    for (int i = 0; i < n; ++i) {
      order.push_back(i + 1);
      debts.push_back(rng.Uniform() * 3);
      rel.push_back(0.05 + 0.95 * rng.Uniform());
    }
    const std::vector<int> tau(static_cast<std::size_t>(n), slots);
    const double best = BruteForceBestOrdering(order, debts, rel, tau, slots).payoff;
    do {
      EXPECT_LE(ExactPayoff(order, debts, rel, tau, slots), best + 1e-12);
    } while (std::next_permutation(order.begin(), order.end()));
  }
}

TEST(KnapsackOracleTest, Examples) {
  EXPECT_TRUE(KnapsackOracle({}, std::vector<Rational>{}, std::vector<int>{}, std::vector<int>{}).subset.empty());
  const std::vector<ClientId> one = {1};
  const SubsetResult r = KnapsackOracle(one, std::vector<Rational>{Rational(3)}, std::vector<int>{3}, std::vector<int>{2});
  EXPECT_TRUE(r.subset.empty());
  EXPECT_EQ(r.value, Rational(0));
}

TEST(FeasibilityTest, WorkedSingleClient) {
  // p = 0.5, T = 3: P(G=1) = 1/2, P(G=2) = 1/4, otherwise 3 slots used.
  // E[I] = 2 * 1/2 + 1 * 1/4 = 1.25, margin = 3 - 1.25 - 1 = 0.75.
  const FeasibilityReport r = FeasibilityTest(StaticConfig(3, {Rational(1, 2)}, {0.5}));
  ASSERT_EQ(r.subsets.size(), 2u);
  EXPECT_TRUE(r.exact);
  EXPECT_NEAR(r.subsets[1].workload, 1.0, 1e-15);
  EXPECT_NEAR(r.subsets[1].idle_mean, 1.25, 1e-15);
  EXPECT_NEAR(r.subsets[1].margin, 0.75, 1e-15);
  EXPECT_EQ(r.verdict, Verdict::kStrictlyFeasible);
  EXPECT_EQ(r.subsets[0].idle_mean, 3.0);
  EXPECT_EQ(r.subsets[0].margin, 0.0);
}

TEST(FeasibilityTest, OverloadedSingleSlot) {
  const FeasibilityReport r = FeasibilityTest(StaticConfig(1, {Rational(1)}, {0.5}));
  EXPECT_NEAR(r.subsets[1].workload, 2.0, 1e-15);
  EXPECT_EQ(r.verdict, Verdict::kInfeasible);
}

TEST(FeasibilityTest, CriterionInstanceMargins) {
  // Two clients, p = 0.5, T = 4, q = 3/5. Exact E[I] for one client:
  // sum_j P(G = j)(4 - j) = 1.5 + 0.5 + 0.125 = 2.125. For both,
  // E[max(0, 4 - G1 - G2)] = 2 P(G1 + G2 = 2) + P(G1 + G2 = 3) = 0.75.
  const FeasibilityReport r = FeasibilityTest(StaticConfig(4, {Rational(3, 5), Rational(3, 5)}, {0.5, 0.5}));
  EXPECT_NEAR(r.subsets[1].idle_mean, 2.125, 1e-14);
  EXPECT_NEAR(r.subsets[3].idle_mean, 0.75, 1e-14);
  EXPECT_NEAR(r.subsets[3].margin, 4 - 0.75 - 2.4, 1e-14);
  EXPECT_EQ(r.verdict, Verdict::kStrictlyFeasible);
  EXPECT_GE(r.min_relative_margin, 0.2);
}

TEST(FeasibilityTest, MonteCarloAgreesWithExact) {
  SystemConfig cfg = StaticConfig(5, {Rational(1, 4), Rational(1, 5), Rational(1, 3)}, {0.6, 0.4, 0.9});
  cfg.clients[1].arrival = PeriodicArrivals{2, 2};
  cfg.clients[2].arrival = PeriodicArrivals{3, 1};
  const FeasibilityReport exact = FeasibilityTest(cfg);
  FeasibilityOptions mc;
  mc.force_monte_carlo = true;
  mc.monte_carlo_periods = 200000;
  const FeasibilityReport est = FeasibilityTest(cfg, mc);
  ASSERT_TRUE(exact.exact);
  ASSERT_FALSE(est.exact);
  for (std::size_t m = 1; m < exact.subsets.size(); ++m) {
    // The per-period sample variance includes the spread across cycle
    // phases, so the 3-sigma half-width is conservative here.
    EXPECT_NEAR(est.subsets[m].idle_mean, exact.subsets[m].idle_mean, est.subsets[m].idle_half_width + 1e-9)
        << "mask " << m;
  }
}

TEST(FeasibilityTest, IdleTimeShrinksAsSubsetGrows) {
  const SystemConfig cfg =
      StaticConfig(6, {Rational(1, 4), Rational(1, 5), Rational(1, 3), Rational(1, 10)}, {0.6, 0.4, 0.9, 0.7});
  const FeasibilityReport r = FeasibilityTest(cfg);
  for (std::uint32_t s = 0; s < r.subsets.size(); ++s) {
    for (std::uint32_t bit = 1; bit < r.subsets.size(); bit <<= 1) {
      if (s & bit) continue;
      EXPECT_LE(r.subsets[s | bit].idle_mean, r.subsets[s].idle_mean + 1e-12);
      EXPECT_GE(r.subsets[s | bit].workload, r.subsets[s].workload);
    }
  }
}

TEST(FeasibilityTest, Preconditions) {
  SystemConfig cfg = StaticConfig(4, {Rational(1, 2)}, {0.5}, {3});
  EXPECT_THROW(FeasibilityTest(cfg), std::invalid_argument);
}

TEST(FulfillmentCheckTest, ZeroAndLinearSeries) {
  MetricsSeries zero;
  zero.num_clients = 1;
  MetricsSeries linear = zero;
  for (int k = 0; k < 200; ++k) {
    PeriodRecord rec;
    rec.k = k;
    rec.delivery_debt = {Rational(0)};
    zero.periods.push_back(rec);
    rec.delivery_debt = {Rational(k, 2)};
    linear.periods.push_back(rec);
  }
  const auto z = FulfillmentCheck(zero, 100);
  EXPECT_EQ(z[0].slope, 0.0);
  EXPECT_TRUE(z[0].fulfilled);
  const auto l = FulfillmentCheck(linear, 100);
  EXPECT_NEAR(l[0].slope, 0.5, 1e-12);
  EXPECT_FALSE(l[0].fulfilled);
  EXPECT_THROW(FulfillmentCheck(zero, 101), std::invalid_argument);
}

TEST(FulfillmentCheckTest, FeasibleTwoClientInstance) {
  SystemConfig cfg = StaticConfig(4, {Rational(3, 5), Rational(3, 5)}, {0.5, 0.5});
  cfg.horizon_periods = 10000;
  const MetricsSeries s = RunSimulation(cfg, PolicyId::kJointDebtChannel);
  for (const auto& v : FulfillmentCheck(s, 5000)) EXPECT_TRUE(v.fulfilled) << "client " << v.client;
}

}  // namespace
}  // namespace rtsched
