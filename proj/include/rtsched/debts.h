#ifndef RTSCHED_DEBTS_H_
#define RTSCHED_DEBTS_H_

#include <span>
#include <stdexcept>
#include <vector>

#include "rtsched/model.h"
#include "rtsched/rational.h"

namespace rtsched {

// Pseudo-debt variants. Each starts at zero, grows by a constant z_n at every
// period start and shrinks by a bounded service amount mu_n at period end.
//   kTimeBased:        z = q / p,  mu = slots spent on the client
//   kWeightedDelivery: z = q / p,  mu = 1 / p per delivered packet
//   kDelivery:         z = q,      mu = 1 per delivered packet (exact)
// p is the time-averaged reliability from WorkloadReliability().
enum class DebtKind { kTimeBased, kWeightedDelivery, kDelivery };

const char* DebtKindName(DebtKind kind);

struct Settlement {
  bool arrived = false;
  int slots_spent = 0;
  bool delivered = false;
};

class PhantomSettlementError : public std::logic_error {
 public:
  explicit PhantomSettlementError(ClientId client);
  ClientId client() const { return client_; }

 private:
  ClientId client_;
};

class DebtLedger {
 public:
  // reliability is ignored for kDelivery.
  DebtLedger(DebtKind kind, std::vector<Rational> q, std::vector<double> reliability);

  void Accrue();
  void Settle(std::span<const Settlement> outcomes);

  DebtKind kind() const { return kind_; }
  int size() const { return static_cast<int>(q_.size()); }
  double Accrual(ClientId client) const;
  double Value(ClientId client) const;
  // Exact value; only meaningful for kDelivery.
  const Rational& ExactValue(ClientId client) const { return exact_[Index(client)]; }
  std::vector<double> Values() const;
  const std::vector<Rational>& ExactValues() const { return exact_; }

 private:
  DebtKind kind_;
  std::vector<Rational> q_;
  std::vector<double> reliability_;
  std::vector<double> values_;
  std::vector<Rational> exact_;
};

// Reliability used for workload accrual: the time-averaged link reliability
// in fixed-rate mode, and 1 / (time-averaged service time) under rate
// adaptation, where one delivery costs s slots instead of 1/p expected slots.
std::vector<double> WorkloadReliability(const SystemConfig& config);

// The three ledgers of a run, kept in lock step.
class DebtBook {
 public:
  explicit DebtBook(const SystemConfig& config);

  void Accrue();
  void Settle(std::span<const Settlement> outcomes);
  DebtSnapshot Snapshot() const;

  const DebtLedger& time_based() const { return time_based_; }
  const DebtLedger& weighted_delivery() const { return weighted_delivery_; }
  const DebtLedger& delivery() const { return delivery_; }

 private:
  DebtLedger time_based_;
  DebtLedger weighted_delivery_;
  DebtLedger delivery_;
};

}  // namespace rtsched

#endif  // RTSCHED_DEBTS_H_
