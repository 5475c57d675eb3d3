#include "rtsched/presets.h"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

namespace rtsched {
namespace {

constexpr std::array<PresetInfo, 5> kPresets = {{
    {"voip-rate-adaptation",
     "VoIP over rate adaptation: 5 subgroups of 22, service 3/4 slots, T=125, group B deadline 83"},
    {"mpeg-rate-adaptation", "MPEG VBR over rate adaptation: 2 groups of 6, service 11/16 slots, T=100"},
    {"voip-gilbert-elliot", "VoIP over Gilbert-Elliot links (1.0/0.2): 5 subgroups of 19, T=41"},
    {"mpeg-gilbert-elliot", "MPEG VBR over Gilbert-Elliot links (1.0/0.2): 2 groups of 4, T=9"},
    {"voip-hetero-deadline", "64 kb/s VoIP, static links, 2 groups of 13, T=33, group B deadline 22"},
}};

constexpr double kVoipPeriodSeconds = 0.020;
constexpr double kMpegPeriodSeconds = 0.006;

int ScaledSlots(int full_slots, int full_count, int count) {
  return std::max(1, static_cast<int>(std::lround(static_cast<double>(full_slots) * count / full_count)));
}

int TwoThirds(int slots) { return std::max(1, 2 * slots / 3); }

// Good state lasts 1 + 0.5 n seconds for the n-th client of a group, the bad
// state 0.5 seconds. The time-average reliability at 1.0/0.2 is then
// (2.2 + n) / (3 + n).
TwoStateSojourn GilbertElliotSojourn(int n, double period_seconds) {
  return {(1.0 + 0.5 * n) / period_seconds, 0.5 / period_seconds};
}

// Three activity states (Great, High, Regular), sticky with self-transition
// 0.9. The matrix is doubly stochastic, so the stationary law is uniform and
// the arrival rate is the plain mean of the state probabilities.
struct MpegSource {
  MarkovArrivals model;
  Rational rate;
};

MpegSource Mpeg(const Rational& factor) {
  const std::array<Rational, 3> probs = {Rational(1), Rational(4, 5), Rational(3, 4)};
  const std::array<const char*, 3> labels = {"Great", "High", "Regular"};
  MpegSource src;
  Rational sum;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const Rational p = probs[i] * factor;
    src.model.states.push_back({labels[i], p.ToDouble()});
    sum += p;
  }
  src.model.transition = {{0.9, 0.05, 0.05}, {0.05, 0.9, 0.05}, {0.05, 0.05, 0.9}};
  src.rate = sum / Rational(3);
  return src;
}

struct Builder {
  SystemConfig config;
  PerClientTwoStateChannel two_state;

  ClientSpec& Add(const Rational& q, int tau, ArrivalModel arrival, std::vector<double> values) {
    ClientSpec c;
    c.id = config.num_clients() + 1;
    c.q = q;
    c.tau = tau;
    c.arrival = std::move(arrival);
    c.channel_values = std::move(values);
    config.clients.push_back(std::move(c));
    return config.clients.back();
  }
};

SystemConfig VoipSubgroups(double scale, TransmissionMode mode, int full_per_subgroup, int full_slots,
                           std::vector<double> values, bool short_b_deadline, std::string name) {
  const int m = ScaledCount(full_per_subgroup, scale);
  Builder b;
  b.config.name = std::move(name);
  b.config.mode = mode;
  b.config.slots_per_period = ScaledSlots(full_slots, full_per_subgroup, m);
  b.config.horizon_periods = 3000;
  b.config.seed = 1;
  b.config.nonrt_client = true;
  const int slots = b.config.slots_per_period;
  // Group A: one packet every 3 periods, 90% delivery. Group B: every 2
  // periods, 70% delivery.
  const Rational q_a = Rational(9, 10) * Rational(1, 3);
  const Rational q_b = Rational(7, 10) * Rational(1, 2);
  for (int sub = 1; sub <= 3; ++sub) {
    for (int n = 1; n <= m; ++n) {
      b.Add(q_a, slots, PeriodicArrivals{3, sub}, values);
      b.two_state.sojourns.push_back(GilbertElliotSojourn(n, kVoipPeriodSeconds));
    }
  }
  for (int sub = 1; sub <= 2; ++sub) {
    for (int n = 1; n <= m; ++n) {
      b.Add(q_b, short_b_deadline ? TwoThirds(slots) : slots, PeriodicArrivals{2, sub}, values);
      b.two_state.sojourns.push_back(GilbertElliotSojourn(n, kVoipPeriodSeconds));
    }
  }
  b.config.channel = std::move(b.two_state);
  return b.config;
}

SystemConfig MpegGroups(double scale, TransmissionMode mode, int full_per_group, int full_slots,
                        std::vector<double> values, std::string name) {
  const int m = ScaledCount(full_per_group, scale);
  Builder b;
  b.config.name = std::move(name);
  b.config.mode = mode;
  b.config.slots_per_period = ScaledSlots(full_slots, full_per_group, m);
  b.config.horizon_periods = 10000;
  b.config.seed = 1;
  b.config.nonrt_client = true;
  const MpegSource a = Mpeg(Rational(1));
  const MpegSource lower = Mpeg(Rational(4, 5));
  for (int n = 1; n <= m; ++n) {
    b.Add(Rational(9, 10) * a.rate, b.config.slots_per_period, a.model, values);
    b.two_state.sojourns.push_back(GilbertElliotSojourn(n, kMpegPeriodSeconds));
  }
  for (int n = 1; n <= m; ++n) {
    b.Add(Rational(3, 5) * lower.rate, b.config.slots_per_period, lower.model, values);
    b.two_state.sojourns.push_back(GilbertElliotSojourn(n, kMpegPeriodSeconds));
  }
  b.config.channel = std::move(b.two_state);
  return b.config;
}

SystemConfig HeteroDeadline(double scale) {
  // Largest group size whose mean workload sum q/p still fits in 33 slots
  // (31.1 at 13, 33.2 at 14).
  constexpr int kFullPerGroup = 13;
  const int m = ScaledCount(kFullPerGroup, scale);
  Builder b;
  b.config.name = "voip-hetero-deadline";
  b.config.mode = TransmissionMode::kFixedRate;
  b.config.slots_per_period = ScaledSlots(33, kFullPerGroup, m);
  b.config.horizon_periods = 3000;
  b.config.seed = 1;
  b.config.nonrt_client = true;
  const int slots = b.config.slots_per_period;
  for (int n = 1; n <= m; ++n) {
    b.Add(Rational(9, 10), slots, PeriodicArrivals{1, 1}, {(84.0 + n) / 100.0});
  }
  for (int n = 1; n <= m; ++n) {
    b.Add(Rational(1, 2), TwoThirds(slots), PeriodicArrivals{1, 1}, {(29.0 + n) / 100.0});
  }
  b.config.channel = StaticChannel{};
  return b.config;
}

}  // namespace

std::span<const PresetInfo> Presets() { return kPresets; }

int ScaledCount(int full, double scale) {
  return std::max(1, static_cast<int>(std::lround(static_cast<double>(full) * scale)));
}

SystemConfig BuildPreset(std::string_view name, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument(fmt::format("scale must be positive, got {}", scale));
  if (name == "voip-rate-adaptation") {
    return VoipSubgroups(scale, TransmissionMode::kRateAdaptation, 22, 125, {3, 4}, true, std::string(name));
  }
  if (name == "voip-gilbert-elliot") {
    return VoipSubgroups(scale, TransmissionMode::kFixedRate, 19, 41, {1.0, 0.2}, false, std::string(name));
  }
  if (name == "mpeg-rate-adaptation") {
    return MpegGroups(scale, TransmissionMode::kRateAdaptation, 6, 100, {11, 16}, std::string(name));
  }
  if (name == "mpeg-gilbert-elliot") {
    return MpegGroups(scale, TransmissionMode::kFixedRate, 4, 9, {1.0, 0.2}, std::string(name));
  }
  if (name == "voip-hetero-deadline") return HeteroDeadline(scale);
  throw std::invalid_argument(fmt::format("unknown preset '{}'", name));
}

}  // namespace rtsched
