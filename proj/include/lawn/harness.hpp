#pragma once

// Scenario runner, baselines and parameter sweeps.

#include "lawn/ao_orchestrator.hpp"
#include "lawn/metrics.hpp"
#include "lawn/scenario.hpp"

#include <string>
#include <vector>

namespace lawn {

struct RunResult {
  EpisodeLog log;
  MetricsReport metrics;
};

/// Waypoints of the straight-flight baseline: constant speed and heading
/// from the start, clamped to the region.
std::vector<Eigen::Vector2d> straight_flight_waypoints(const ScenarioConfig& cfg);

EpisodeSetup make_setup(const ScenarioConfig& cfg);

RunResult run(const ScenarioConfig& cfg);

enum class SweepAxis { power_budget, rate_threshold, blocklength };

SweepAxis parse_sweep_axis(const std::string& s);
std::string to_string(SweepAxis a);

/// Copy of `cfg` with the swept parameter set to `value`.
ScenarioConfig with_axis(const ScenarioConfig& cfg, SweepAxis axis, double value);

struct SweepRow {
  double value = 0.0;
  bool ok = false;
  std::string error;
  MetricsReport metrics;
};

/// One row per value, in the order given. Each row pools `replications`
/// episodes seeded cfg.seed, cfg.seed + 1, ...; the same seeds are used for
/// every value. Episodes run on up to `jobs` threads; a failing row is
/// flagged and the others still run.
std::vector<SweepRow> sweep(const ScenarioConfig& cfg, SweepAxis axis,
                            const std::vector<double>& values, int jobs = 1,
                            int replications = 1);

}  // namespace lawn
