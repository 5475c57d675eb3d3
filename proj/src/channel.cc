#include "rtsched/channel.h"

#include "rtsched/markov.h"

namespace rtsched {

Matrix TwoStateTransition(const TwoStateSojourn& sojourn) {
  const double leave_good = 1.0 / sojourn.mean_good_periods;
  const double leave_bad = 1.0 / sojourn.mean_bad_periods;
  return {{1.0 - leave_good, leave_good}, {leave_bad, 1.0 - leave_bad}};
}

std::vector<double> ChannelStationary(const ChannelModel& model, std::size_t client_index) {
  if (std::holds_alternative<StaticChannel>(model)) return {1.0};
  if (const auto* pc = std::get_if<PerClientTwoStateChannel>(&model)) {
    return StationaryDistribution(TwoStateTransition(pc->sojourns.at(client_index)));
  }
  return StationaryDistribution(std::get<GlobalMarkovChannel>(model).transition);
}

double AverageReliability(const ChannelModel& model, const ClientSpec& client) {
  const std::vector<double> pi = ChannelStationary(model, Index(client.id));
  double sum = 0.0;
  for (std::size_t c = 0; c < pi.size(); ++c) sum += pi[c] * client.channel_values[c];
  return sum;
}

double AverageServiceTime(const ChannelModel& model, const ClientSpec& client) {
  return AverageReliability(model, client);
}

ChannelProcess::ChannelProcess(const ChannelModel& model, int num_clients, Rng& rng)
    : model_(&model) {
  state_.per_client.assign(static_cast<std::size_t>(num_clients), 0);
  if (const auto* pc = std::get_if<PerClientTwoStateChannel>(&model)) {
    for (int i = 0; i < num_clients; ++i) {
      per_client_transition_.push_back(TwoStateTransition(pc->sojourns[static_cast<std::size_t>(i)]));
      state_.per_client[static_cast<std::size_t>(i)] =
          SampleIndex(StationaryDistribution(per_client_transition_.back()), rng.Uniform());
    }
  } else if (const auto* g = std::get_if<GlobalMarkovChannel>(&model)) {
    const int initial = SampleIndex(StationaryDistribution(g->transition), rng.Uniform());
    state_.per_client.assign(static_cast<std::size_t>(num_clients), initial);
  }
}

ChannelState ChannelProcess::Next(Rng& rng) {
  if (std::holds_alternative<PerClientTwoStateChannel>(*model_)) {
    for (std::size_t i = 0; i < state_.per_client.size(); ++i) {
      state_.per_client[i] = StepChain(per_client_transition_[i], state_.per_client[i], rng);
    }
  } else if (const auto* g = std::get_if<GlobalMarkovChannel>(model_)) {
    const int next = StepChain(g->transition, state_.per_client.empty() ? 0 : state_.per_client[0], rng);
    for (int& s : state_.per_client) s = next;
  }
  return state_;
}

}  // namespace rtsched
