#ifndef RTSCHED_TRAFFIC_H_
#define RTSCHED_TRAFFIC_H_

#include <cstdint>
#include <vector>

#include "rtsched/model.h"
#include "rtsched/rng.h"

namespace rtsched {

// Long-run packets per period for one client: 1/interval for periodic
// arrivals, sum_s pi(s) * arrival_probability(s) for Markov arrivals.
// Throws ReducibleChainError for a reducible activity chain.
double ArrivalFrequency(const ArrivalModel& model);

// Per-run arrival generator. Periodic clients consume no randomness; each
// Markov client draws its initial activity state from the stationary
// distribution, then per period one uniform to move and one to arrive.
class TrafficProcess {
 public:
  TrafficProcess(const std::vector<ClientSpec>& clients, Rng& rng);

  // Arrival set S_k in ascending id order.
  std::vector<ClientId> NextArrivals(std::int64_t k, Rng& rng);

  // Current activity state per client (always 0 for periodic clients).
  const std::vector<int>& activity_states() const { return states_; }

 private:
  const std::vector<ClientSpec>* clients_;
  std::vector<int> states_;
};

}  // namespace rtsched

#endif  // RTSCHED_TRAFFIC_H_
