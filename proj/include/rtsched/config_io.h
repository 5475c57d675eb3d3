#ifndef RTSCHED_CONFIG_IO_H_
#define RTSCHED_CONFIG_IO_H_

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rtsched/model.h"

namespace rtsched {

// Parse or validation failure. line() is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, int line = 0, std::string field = {});
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

// YAML document, either a full description:
//
//   name: two-clients
//   slots_per_period: 4
//   mode: fixed-rate            # or rate-adaptation
//   horizon_periods: 10000
//   seed: 7
//   nonrt_client: false
//   channel: {model: static}    # per-client-two-state | global-markov
//   clients:
//     - id: 1
//       q: "3/5"                # or "0.6"
//       tau: 4
//       arrival: {type: periodic, interval: 1, offset: 1}
//       channel: ["0.5"]        # one value per channel state
//
// or a preset reference with overrides:
//
//   preset: voip-gilbert-elliot
//   scale: 0.3
//   horizon_periods: 5000
//
// Markov arrivals use {type: markov, states: [{label, probability}],
// transition: [[...]]}. Per-client-two-state clients carry
// sojourn: {good: <periods>, bad: <periods>}; global-markov channels give
// states: [labels] and transition: [[...]] under channel.
//
// Validation errors fail the load; warnings are kept by Validate().
SystemConfig ParseConfig(std::string_view yaml_text);
SystemConfig LoadConfig(const std::filesystem::path& path);

// Full (non-preset) form, readable by ParseConfig with no loss.
std::string EmitConfig(const SystemConfig& config);

}  // namespace rtsched

#endif  // RTSCHED_CONFIG_IO_H_
