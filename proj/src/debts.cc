#include "rtsched/debts.h"

#include <stdexcept>

#include <fmt/format.h>

#include "rtsched/channel.h"

namespace rtsched {
namespace {

std::vector<Rational> Requirements(const SystemConfig& config) {
  std::vector<Rational> q;
  q.reserve(config.clients.size());
  for (const auto& c : config.clients) q.push_back(c.q);
  return q;
}

}  // namespace

const char* DebtKindName(DebtKind kind) {
  switch (kind) {
    case DebtKind::kTimeBased:
      return "time-based";
    case DebtKind::kWeightedDelivery:
      return "weighted-delivery";
    case DebtKind::kDelivery:
      return "delivery";
  }
  return "?";
}

PhantomSettlementError::PhantomSettlementError(ClientId client)
    : std::logic_error(fmt::format("settlement for phantom packet (client {})", client)), client_(client) {}

DebtLedger::DebtLedger(DebtKind kind, std::vector<Rational> q, std::vector<double> reliability)
    : kind_(kind),
      q_(std::move(q)),
      reliability_(std::move(reliability)),
      values_(q_.size(), 0.0),
      exact_(q_.size()) {
  if (kind_ != DebtKind::kDelivery && reliability_.size() != q_.size()) {
    throw std::invalid_argument("debt ledger needs one reliability per client");
  }
}

double DebtLedger::Accrual(ClientId client) const {
  const std::size_t i = Index(client);
  if (kind_ == DebtKind::kDelivery) return q_[i].ToDouble();
  return q_[i].ToDouble() / reliability_[i];
}

void DebtLedger::Accrue() {
  for (std::size_t i = 0; i < q_.size(); ++i) {
    if (kind_ == DebtKind::kDelivery) {
      exact_[i] += q_[i];
      values_[i] = exact_[i].ToDouble();
    } else {
      values_[i] += q_[i].ToDouble() / reliability_[i];
    }
  }
}

void DebtLedger::Settle(std::span<const Settlement> outcomes) {
  if (outcomes.size() != q_.size()) throw std::invalid_argument("one settlement per client required");
  for (std::size_t i = 0; i < q_.size(); ++i) {
    const Settlement& o = outcomes[i];
    if (!o.arrived && (o.slots_spent > 0 || o.delivered)) {
      throw PhantomSettlementError(static_cast<ClientId>(i + 1));
    }
    switch (kind_) {
      case DebtKind::kTimeBased:
        values_[i] -= o.slots_spent;
        break;
      case DebtKind::kWeightedDelivery:
        if (o.delivered) values_[i] -= 1.0 / reliability_[i];
        break;
      case DebtKind::kDelivery:
        if (o.delivered) {
          exact_[i] -= Rational(1);
          values_[i] = exact_[i].ToDouble();
        }
        break;
    }
  }
}

double DebtLedger::Value(ClientId client) const { return values_[Index(client)]; }

std::vector<double> DebtLedger::Values() const { return values_; }

std::vector<double> WorkloadReliability(const SystemConfig& config) {
  std::vector<double> out;
  out.reserve(config.clients.size());
  for (const auto& c : config.clients) {
    if (config.mode == TransmissionMode::kFixedRate) {
      out.push_back(AverageReliability(config.channel, c));
    } else {
      out.push_back(1.0 / AverageServiceTime(config.channel, c));
    }
  }
  return out;
}

DebtBook::DebtBook(const SystemConfig& config)
    : time_based_(DebtKind::kTimeBased, Requirements(config), WorkloadReliability(config)),
      weighted_delivery_(DebtKind::kWeightedDelivery, Requirements(config), WorkloadReliability(config)),
      delivery_(DebtKind::kDelivery, Requirements(config), {}) {}

void DebtBook::Accrue() {
  time_based_.Accrue();
  weighted_delivery_.Accrue();
  delivery_.Accrue();
}

void DebtBook::Settle(std::span<const Settlement> outcomes) {
  time_based_.Settle(outcomes);
  weighted_delivery_.Settle(outcomes);
  delivery_.Settle(outcomes);
}

DebtSnapshot DebtBook::Snapshot() const {
  return DebtSnapshot{time_based_.Values(), weighted_delivery_.Values(), delivery_.ExactValues()};
}

}  // namespace rtsched
