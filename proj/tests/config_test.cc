#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "rtsched/config_io.h"
#include "rtsched/experiment.h"
#include "rtsched/presets.h"

namespace rtsched {
namespace {

void ExpectSameConfig(const SystemConfig& a, const SystemConfig& b) {
  EXPECT_EQ(a.name, b.name);
  EXPECT_EQ(a.slots_per_period, b.slots_per_period);
  EXPECT_EQ(a.mode, b.mode);
  EXPECT_EQ(a.horizon_periods, b.horizon_periods);
  EXPECT_EQ(a.seed, b.seed);
  EXPECT_EQ(a.nonrt_client, b.nonrt_client);
  EXPECT_EQ(a.channel.index(), b.channel.index());
  if (const auto* x = std::get_if<PerClientTwoStateChannel>(&a.channel)) {
    const auto& y = std::get<PerClientTwoStateChannel>(b.channel);
    ASSERT_EQ(x->sojourns.size(), y.sojourns.size());
    for (std::size_t i = 0; i < x->sojourns.size(); ++i) {
      EXPECT_EQ(x->sojourns[i].mean_good_periods, y.sojourns[i].mean_good_periods);
      EXPECT_EQ(x->sojourns[i].mean_bad_periods, y.sojourns[i].mean_bad_periods);
    }
  }
  if (const auto* x = std::get_if<GlobalMarkovChannel>(&a.channel)) {
    const auto& y = std::get<GlobalMarkovChannel>(b.channel);
    EXPECT_EQ(x->labels, y.labels);
    EXPECT_EQ(x->transition, y.transition);
  }
  ASSERT_EQ(a.clients.size(), b.clients.size());
  for (std::size_t i = 0; i < a.clients.size(); ++i) {
    const ClientSpec& c = a.clients[i];
    const ClientSpec& d = b.clients[i];
    EXPECT_EQ(c.id, d.id);
    EXPECT_EQ(c.q, d.q);
    EXPECT_EQ(c.tau, d.tau);
    EXPECT_EQ(c.channel_values, d.channel_values);
    ASSERT_EQ(c.arrival.index(), d.arrival.index());
    if (const auto* p = std::get_if<PeriodicArrivals>(&c.arrival)) {
      EXPECT_EQ(p->interval, std::get<PeriodicArrivals>(d.arrival).interval);
      EXPECT_EQ(p->offset, std::get<PeriodicArrivals>(d.arrival).offset);
    } else {
      const auto& m = std::get<MarkovArrivals>(c.arrival);
      const auto& n = std::get<MarkovArrivals>(d.arrival);
      EXPECT_EQ(m.transition, n.transition);
      ASSERT_EQ(m.states.size(), n.states.size());
      for (std::size_t s = 0; s < m.states.size(); ++s) {
        EXPECT_EQ(m.states[s].label, n.states[s].label);
        EXPECT_EQ(m.states[s].arrival_probability, n.states[s].arrival_probability);
      }
    }
  }
}

TEST(ConfigIoTest, RoundTripEveryPreset) {
  for (const PresetInfo& p : Presets()) {
    SCOPED_TRACE(std::string(p.name));
    const SystemConfig cfg = BuildPreset(p.name, 0.5);
    ExpectSameConfig(cfg, ParseConfig(EmitConfig(cfg)));
  }
}

TEST(ConfigIoTest, RoundTripGlobalMarkovAndAwkwardNumbers) {
  SystemConfig cfg;
  cfg.name = "global";
  cfg.slots_per_period = 7;
  cfg.horizon_periods = 123;
  cfg.seed = 18446744073709551615ull;
  cfg.channel = GlobalMarkovChannel{{"fast", "slow"}, {{0.1, 0.9}, {1.0 / 3, 2.0 / 3}}};
  ClientSpec c;
  c.id = 1;
  c.q = Rational(1, 3);
  c.tau = 5;
  c.arrival = PeriodicArrivals{4, 3};
  c.channel_values = {0.1 + 0.2, 1.0 / 7};
  cfg.clients.push_back(c);
  ExpectSameConfig(cfg, ParseConfig(EmitConfig(cfg)));
}

TEST(ConfigIoTest, ParsesHandWrittenFile) {
  const SystemConfig cfg = ParseConfig(R"(
name: two
slots_per_period: 4
mode: fixed-rate
horizon_periods: 50
clients:
  - id: 1
    q: "0.6"
    tau: 4
    arrival: {type: periodic, interval: 1, offset: 1}
    channel: [0.5]
  - id: 2
    q: 3/5
    tau: 3
    arrival:
      type: markov
      states: [{label: on, probability: 0.9}, {label: off, probability: 0.1}]
      transition: [[0.9, 0.1], [0.2, 0.8]]
    channel: [0.7]
)");
  EXPECT_EQ(cfg.clients[0].q, Rational(3, 5));
  EXPECT_EQ(cfg.clients[1].q, Rational(3, 5));
  EXPECT_TRUE(std::holds_alternative<StaticChannel>(cfg.channel));
  EXPECT_EQ(std::get<MarkovArrivals>(cfg.clients[1].arrival).states[1].label, "off");
}

TEST(ConfigIoTest, PresetReferenceWithOverrides) {
  const SystemConfig cfg = ParseConfig("preset: voip-gilbert-elliot\nscale: 0.5\nhorizon_periods: 77\nseed: 5\n");
  EXPECT_EQ(cfg.horizon_periods, 77);
  EXPECT_EQ(cfg.seed, 5u);
  EXPECT_EQ(cfg.num_clients(), 5 * 10);
}

TEST(ConfigIoTest, ErrorsCarryLineAndField) {
  try {
    ParseConfig("slots_per_period: 4\nclients:\n  - id: 1\n    q: 0.5\n    tau: four\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 5);
    EXPECT_EQ(e.field(), "clients[0].tau");
  }
  EXPECT_THROW(ParseConfig("slots_per_period: [4\n"), ConfigError);
  EXPECT_THROW(ParseConfig("preset: nope\n"), ConfigError);
}

TEST(ConfigIoTest, ValidationFailsTheLoad) {
  try {
    ParseConfig(R"(
slots_per_period: 4
clients:
  - {id: 1, q: "0", tau: 5, arrival: {type: periodic}, channel: ["0.5"]}
)");
    FAIL();
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("q must be positive"), std::string::npos);
    EXPECT_NE(what.find("tau exceeds period length"), std::string::npos);
  }
}

TEST(ConfigIoTest, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "rtsched_config_test.yaml";
  std::ofstream(path) << EmitConfig(BuildPreset("voip-hetero-deadline", 0.2));
  EXPECT_EQ(LoadConfig(path).num_clients(), 6);  // round(13 * 0.2) = 3 per group
  std::filesystem::remove(path);
  EXPECT_THROW(LoadConfig(path), ConfigError);
}

TEST(ConfigIoTest, ShippedSamplesLoad) {
  const std::filesystem::path dir = std::filesystem::path(RTSCHED_SOURCE_DIR) / "configs";
  EXPECT_EQ(LoadConfig(dir / "two-clients.yaml").num_clients(), 2);
  for (const char* name : {"two-clients-exp.yaml", "ge-small.yaml"}) {
    EXPECT_TRUE(CheckExperimentSpec(LoadExperimentSpec(dir / name)).empty()) << name;
  }
}

TEST(PresetTest, HeteroDeadlineFullScale) {
  const SystemConfig cfg = BuildPreset("voip-hetero-deadline");
  ASSERT_EQ(cfg.slots_per_period, 33);
  const int half = cfg.num_clients() / 2;
  for (int n = 1; n <= half; ++n) {
    const ClientSpec& a = cfg.clients[static_cast<std::size_t>(n - 1)];
    const ClientSpec& b = cfg.clients[static_cast<std::size_t>(half + n - 1)];
    EXPECT_EQ(a.tau, 33);
    EXPECT_EQ(b.tau, 22);
    EXPECT_DOUBLE_EQ(a.channel_values[0], (84.0 + n) / 100);
    EXPECT_DOUBLE_EQ(b.channel_values[0], (29.0 + n) / 100);
    EXPECT_EQ(a.q, Rational(9, 10));
    EXPECT_EQ(b.q, Rational(1, 2));
  }
}

TEST(PresetTest, VoipRateAdaptationFullScale) {
  const SystemConfig cfg = BuildPreset("voip-rate-adaptation");
  EXPECT_EQ(cfg.slots_per_period, 125);
  EXPECT_EQ(cfg.mode, TransmissionMode::kRateAdaptation);
  ASSERT_EQ(cfg.num_clients(), 110);
  // Delivery ratio 90% of one packet per 3 periods, 70% of one per 2.
  EXPECT_EQ(cfg.clients[0].q, Rational(3, 10));
  EXPECT_EQ(cfg.clients[0].tau, 125);
  EXPECT_EQ(cfg.clients[66].q, Rational(7, 20));
  EXPECT_EQ(cfg.clients[66].tau, 83);
  EXPECT_EQ(cfg.clients[0].channel_values, (std::vector<double>{3, 4}));
  EXPECT_EQ(std::get<PeriodicArrivals>(cfg.clients[22].arrival).offset, 2);
}

TEST(PresetTest, MpegRates) {
  const SystemConfig cfg = BuildPreset("mpeg-rate-adaptation");
  EXPECT_EQ(cfg.slots_per_period, 100);
  ASSERT_EQ(cfg.num_clients(), 12);
  EXPECT_EQ(cfg.clients[0].q, Rational(153, 200));  // 0.9 * 0.85
  EXPECT_EQ(cfg.clients[6].q, Rational(51, 125));   // 0.6 * 0.68
  EXPECT_EQ(cfg.clients[0].channel_values, (std::vector<double>{11, 16}));
}

TEST(PresetTest, ScalingShrinksGroupsAndPeriod) {
  const SystemConfig cfg = BuildPreset("voip-gilbert-elliot", 6.0 / 19);
  EXPECT_EQ(cfg.num_clients(), 30);
  EXPECT_EQ(cfg.slots_per_period, 13);  // round(41 * 6 / 19)
  EXPECT_EQ(BuildPreset("voip-gilbert-elliot", 1e-6).num_clients(), 5);
  EXPECT_THROW(BuildPreset("voip-gilbert-elliot", 0.0), std::invalid_argument);
  EXPECT_THROW(BuildPreset("unknown"), std::invalid_argument);
}

}  // namespace
}  // namespace rtsched
