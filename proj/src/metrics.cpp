#include "lawn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lawn {

MetricsReport compute_metrics(const EpisodeLog& log, int agv_count) {
  const auto k_count = static_cast<std::size_t>(agv_count);
  MetricsReport m;
  m.rmse.assign(k_count, 0.0);
  m.outage_rate.assign(k_count, 0.0);
  m.mean_outage_probability.assign(k_count, 0.0);
  for (const auto& rec : log.slots) {
    m.slot_costs.push_back(rec.cost);
    m.total_cost += rec.cost;
    for (std::size_t k = 0; k < k_count; ++k) {
      m.rmse[k] += rec.tracking_error[k] * rec.tracking_error[k];
      m.outage_rate[k] += rec.delivered[k] ? 0.0 : 1.0;
      m.mean_outage_probability[k] += rec.outage[k];
    }
  }
  const double n = static_cast<double>(log.slots.size());
  for (std::size_t k = 0; k < k_count; ++k) {
    if (n > 0.0) {
      m.rmse[k] = std::sqrt(m.rmse[k] / n);
      m.outage_rate[k] /= n;
      m.mean_outage_probability[k] /= n;
    }
  }
  m.cdf_samples = m.rmse;
  std::sort(m.cdf_samples.begin(), m.cdf_samples.end());
  return m;
}

MetricsReport pool_metrics(const std::vector<MetricsReport>& runs) {
  if (runs.empty()) throw std::invalid_argument("pool_metrics: no runs");
  const double r = static_cast<double>(runs.size());
  MetricsReport m;
  const std::size_t k_count = runs.front().rmse.size();
  m.rmse.assign(k_count, 0.0);
  m.outage_rate.assign(k_count, 0.0);
  m.mean_outage_probability.assign(k_count, 0.0);
  m.slot_costs.assign(runs.front().slot_costs.size(), 0.0);
  for (const auto& run : runs) {
    if (run.rmse.size() != k_count || run.slot_costs.size() != m.slot_costs.size()) {
      throw std::invalid_argument("pool_metrics: runs differ in AGV count or length");
    }
    m.total_cost += run.total_cost / r;
    for (std::size_t k = 0; k < k_count; ++k) {
      m.rmse[k] += run.rmse[k] * run.rmse[k] / r;
      m.outage_rate[k] += run.outage_rate[k] / r;
      m.mean_outage_probability[k] += run.mean_outage_probability[k] / r;
    }
    for (std::size_t n = 0; n < m.slot_costs.size(); ++n) m.slot_costs[n] += run.slot_costs[n] / r;
  }
  for (auto& v : m.rmse) v = std::sqrt(v);
  m.cdf_samples = m.rmse;
  std::sort(m.cdf_samples.begin(), m.cdf_samples.end());
  return m;
}

double empirical_cdf(const std::vector<double>& sorted_samples, double x) {
  if (sorted_samples.empty()) return 0.0;
  const auto it = std::upper_bound(sorted_samples.begin(), sorted_samples.end(), x);
  return static_cast<double>(it - sorted_samples.begin()) /
         static_cast<double>(sorted_samples.size());
}

std::vector<std::pair<double, double>> cdf_points(const std::vector<double>& sorted_samples) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < sorted_samples.size(); ++i) {
    if (i + 1 < sorted_samples.size() && sorted_samples[i + 1] == sorted_samples[i]) continue;
    out.emplace_back(sorted_samples[i],
                     static_cast<double>(i + 1) / static_cast<double>(sorted_samples.size()));
  }
  return out;
}

}  // namespace lawn
