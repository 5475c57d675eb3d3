#include "rtsched/traffic.h"

#include "rtsched/markov.h"

namespace rtsched {

double ArrivalFrequency(const ArrivalModel& model) {
  if (const auto* p = std::get_if<PeriodicArrivals>(&model)) return 1.0 / p->interval;
  const auto& m = std::get<MarkovArrivals>(model);
  const std::vector<double> pi = StationaryDistribution(m.transition);
  double rate = 0.0;
  for (std::size_t s = 0; s < pi.size(); ++s) rate += pi[s] * m.states[s].arrival_probability;
  return rate;
}

TrafficProcess::TrafficProcess(const std::vector<ClientSpec>& clients, Rng& rng)
    : clients_(&clients), states_(clients.size(), 0) {
  for (std::size_t i = 0; i < clients.size(); ++i) {
    if (const auto* m = std::get_if<MarkovArrivals>(&clients[i].arrival)) {
      states_[i] = SampleIndex(StationaryDistribution(m->transition), rng.Uniform());
    }
  }
}

std::vector<ClientId> TrafficProcess::NextArrivals(std::int64_t k, Rng& rng) {
  std::vector<ClientId> arrivals;
  for (std::size_t i = 0; i < clients_->size(); ++i) {
    const ClientSpec& c = (*clients_)[i];
    if (const auto* p = std::get_if<PeriodicArrivals>(&c.arrival)) {
      if (k % p->interval == p->offset - 1) arrivals.push_back(c.id);
      continue;
    }
    const auto& m = std::get<MarkovArrivals>(c.arrival);
    states_[i] = StepChain(m.transition, states_[i], rng);
    if (rng.Bernoulli(m.states[static_cast<std::size_t>(states_[i])].arrival_probability)) {
      arrivals.push_back(c.id);
    }
  }
  return arrivals;
}

}  // namespace rtsched
