#pragma once

// Episode summaries: tracking RMSE, its empirical CDF, costs and outage.

#include "lawn/ao_orchestrator.hpp"

#include <vector>

namespace lawn {

/// Per-AGV RMSE is taken over every slot of the episode (error measured at
/// the start of each slot). The pooled CDF sample set is the per-AGV RMSEs,
/// sorted ascending.
struct MetricsReport {
  std::vector<double> rmse;
  std::vector<double> cdf_samples;
  double total_cost = 0.0;
  std::vector<double> slot_costs;
  /// Fraction of slots whose command was not delivered.
  std::vector<double> outage_rate;
  /// Mean outage probability over slots.
  std::vector<double> mean_outage_probability;
};

MetricsReport compute_metrics(const EpisodeLog& log, int agv_count);

/// Combines episodes of equal length: costs and rates are averaged and each
/// AGV's RMSE is taken over the slots of every episode.
MetricsReport pool_metrics(const std::vector<MetricsReport>& runs);

/// Fraction of samples <= x.
double empirical_cdf(const std::vector<double>& sorted_samples, double x);

/// (x, F(x)) at each distinct sorted sample.
std::vector<std::pair<double, double>> cdf_points(const std::vector<double>& sorted_samples);

}  // namespace lawn
