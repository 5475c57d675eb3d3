#ifndef RTSCHED_PRESETS_H_
#define RTSCHED_PRESETS_H_

#include <span>
#include <string_view>

#include "rtsched/model.h"

namespace rtsched {

struct PresetInfo {
  std::string_view name;
  std::string_view description;
};

std::span<const PresetInfo> Presets();

// Builds a named scenario. scale multiplies the per-group client counts
// (at least one client per group is kept) and T shrinks in proportion, so
// per-group load relative to the period is roughly unchanged.
// Throws std::invalid_argument for unknown names or scale <= 0.
SystemConfig BuildPreset(std::string_view name, double scale = 1.0);

// max(1, round(full * scale))
int ScaledCount(int full, double scale);

}  // namespace rtsched

#endif  // RTSCHED_PRESETS_H_
