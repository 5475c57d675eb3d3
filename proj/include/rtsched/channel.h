#ifndef RTSCHED_CHANNEL_H_
#define RTSCHED_CHANNEL_H_

#include <vector>

#include "rtsched/model.h"
#include "rtsched/rng.h"

namespace rtsched {

// Two-state chain with per-period switch probabilities 1/mean_good and
// 1/mean_bad; geometric sojourns with the given means.
Matrix TwoStateTransition(const TwoStateSojourn& sojourn);

// Stationary distribution of the channel states seen by one client.
std::vector<double> ChannelStationary(const ChannelModel& model, std::size_t client_index);

// Time-averaged link reliability sum_c pi(c) p_{c,n}. Throws
// ReducibleChainError for a reducible chain.
double AverageReliability(const ChannelModel& model, const ClientSpec& client);

// Time-averaged service time sum_c pi(c) s_{c,n} (rate adaptation).
double AverageServiceTime(const ChannelModel& model, const ClientSpec& client);

// Per-run channel generator. The state is drawn once per period and held
// for all T slots. Initial states come from the stationary distribution.
class ChannelProcess {
 public:
  ChannelProcess(const ChannelModel& model, int num_clients, Rng& rng);

  ChannelState Next(Rng& rng);

 private:
  const ChannelModel* model_;
  std::vector<Matrix> per_client_transition_;
  ChannelState state_;
};

}  // namespace rtsched

#endif  // RTSCHED_CHANNEL_H_
