#include <gtest/gtest.h>

#include "rtsched/debts.h"
#include "rtsched/presets.h"
#include "test_util.h"

namespace rtsched {
namespace {

TEST(DebtLedgerTest, StartsAtZero) {
  for (DebtKind kind : {DebtKind::kTimeBased, DebtKind::kWeightedDelivery, DebtKind::kDelivery}) {
    const DebtLedger ledger(kind, {Rational(1, 2)}, {0.5});
    EXPECT_EQ(ledger.Value(1), 0.0) << DebtKindName(kind);
  }
}

TEST(DebtLedgerTest, DeliveryAccruesQ) {
  DebtLedger ledger(DebtKind::kDelivery, {Rational(9, 10)}, {0.3});
  ledger.Accrue();
  EXPECT_EQ(ledger.ExactValue(1), Rational(9, 10));
}

TEST(DebtLedgerTest, TimeBasedAccruesWorkload) {
  DebtLedger ledger(DebtKind::kTimeBased, {Rational(1, 2)}, {0.5});
  ledger.Accrue();
  EXPECT_DOUBLE_EQ(ledger.Value(1), 1.0);
}

TEST(DebtLedgerTest, Settlements) {
  DebtLedger delivery(DebtKind::kDelivery, {Rational(1, 2)}, {0.5});
  delivery.Settle(std::vector<Settlement>{{true, 2, true}});
  EXPECT_EQ(delivery.ExactValue(1), Rational(-1));

  DebtLedger time_based(DebtKind::kTimeBased, {Rational(1, 2)}, {0.5});
  time_based.Accrue();
  time_based.Settle(std::vector<Settlement>{{true, 0, false}});
  EXPECT_DOUBLE_EQ(time_based.Value(1), 1.0);
  time_based.Settle(std::vector<Settlement>{{true, 3, true}});
  EXPECT_DOUBLE_EQ(time_based.Value(1), -2.0);

  DebtLedger weighted(DebtKind::kWeightedDelivery, {Rational(1, 2)}, {0.5});
  weighted.Settle(std::vector<Settlement>{{true, 1, true}});
  EXPECT_DOUBLE_EQ(weighted.Value(1), -2.0);
}

TEST(DebtLedgerTest, PhantomSettlement) {
  DebtLedger ledger(DebtKind::kTimeBased, {Rational(1, 2), Rational(1, 2)}, {0.5, 0.5});
  try {
    ledger.Settle(std::vector<Settlement>{{true, 1, false}, {false, 1, false}});
    FAIL() << "expected PhantomSettlementError";
  } catch (const PhantomSettlementError& e) {
    EXPECT_EQ(e.client(), 2);
    EXPECT_NE(std::string(e.what()).find("settlement for phantom packet"), std::string::npos);
  }
}

TEST(DebtBookTest, WorkloadReliabilityByMode) {
  const SystemConfig ge = BuildPreset("voip-gilbert-elliot", 0.1);
  const auto rel = WorkloadReliability(ge);
  EXPECT_NEAR(rel[0], 0.8, 1e-12);
  const SystemConfig ra = BuildPreset("voip-rate-adaptation", 0.1);
  const auto ra_rel = WorkloadReliability(ra);
  // Service 3 slots (good) / 4 (bad), pi_good = 3/4 for n = 1.
  EXPECT_NEAR(ra_rel[0], 1.0 / (3 * 0.75 + 4 * 0.25), 1e-12);
}

TEST(DebtBookTest, SnapshotCarriesAllThree) {
  DebtBook book(testing::StaticConfig(4, {Rational(1, 2)}, {0.25}));
  book.Accrue();
  const DebtSnapshot s = book.Snapshot();
  EXPECT_DOUBLE_EQ(s.time_based[0], 2.0);
  EXPECT_DOUBLE_EQ(s.weighted_delivery[0], 2.0);
  EXPECT_EQ(s.delivery[0], Rational(1, 2));
}

}  // namespace
}  // namespace rtsched
