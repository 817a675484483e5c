#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swarm/batch.hpp"
#include "swarm/engine.hpp"
#include "swarm/metrics.hpp"

namespace swarm {

/// SVG of the swarm at `step` (the latest snapshot at or before it): goal
/// discs, obstacles, beacons as black dots sized by total weight with their
/// guiding vectors as arrows, foragers colored by mode. Throws "step out of
/// range" and "no records".
std::string render_frame(const EventLog& log, std::int64_t step);

/// Median forager delay (IQR whiskers) and random baseline against swarm
/// size, one series per scenario, with the lower bound dashed.
std::string render_delay_plot(const std::vector<MetricsRow>& rows);

struct EntropyCurve {
  std::string label;
  std::vector<EntropySample> samples;
};

/// Normalized forager entropy against time.
std::string render_entropy_plot(const std::vector<EntropyCurve>& curves);

}  // namespace swarm
