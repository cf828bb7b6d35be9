#pragma once

// CSV and JSON outputs and their readers.
//
// Episode log CSV, one row per slot and AGV:
//   slot,agv_id,pos_x,pos_y,ref_x,ref_y,err_m,power_w,outage_prob,delivered,cost
// Positions are at the start of the slot; power, outage probability and
// cost are the slot decision; cost is the AGV's share of the slot objective.

#include "lawn/ao_orchestrator.hpp"
#include "lawn/harness.hpp"
#include "lawn/metrics.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace lawn {

struct LogRow {
  int slot = 0;
  int agv_id = 0;
  double pos_x = 0.0;
  double pos_y = 0.0;
  double ref_x = 0.0;
  double ref_y = 0.0;
  double err_m = 0.0;
  double power_w = 0.0;
  double outage_prob = 0.0;
  bool delivered = false;
  double cost = 0.0;
};

std::vector<LogRow> log_rows(const EpisodeLog& log);
void write_log_csv(std::ostream& out, const EpisodeLog& log);
std::vector<LogRow> read_log_csv(std::istream& in);

void write_summary_json(std::ostream& out, const MetricsReport& metrics, std::uint64_t seed);
MetricsReport read_summary_json(std::istream& in);

/// Columns: axis,value,ok,total_cost,mean_rmse,mean_outage_rate,rmse_0..rmse_{K-1},error
void write_sweep_csv(std::ostream& out, SweepAxis axis, const std::vector<SweepRow>& rows);

struct SweepCsvRow {
  std::string axis;
  double value = 0.0;
  bool ok = false;
  double total_cost = 0.0;
  double mean_rmse = 0.0;
  double mean_outage_rate = 0.0;
  std::vector<double> rmse;
  std::string error;
};
std::vector<SweepCsvRow> read_sweep_csv(std::istream& in);

/// Drone waypoint and summed slot objective: slot,drone_x,drone_y,objective
void write_trajectory_csv(std::ostream& out, const EpisodeLog& log);

/// Per-slot AO objective traces: slot,iteration,objective,converged
void write_convergence_csv(std::ostream& out, const EpisodeLog& log);

std::string format_double(double v);

}  // namespace lawn
