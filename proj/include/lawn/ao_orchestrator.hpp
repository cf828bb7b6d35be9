#pragma once

// Per-slot alternating optimization over control increments, transmit
// power and drone waypoint, and the episode loop that applies the first
// increment through an outage-gated link.

#include "lawn/agv_dynamics.hpp"
#include "lawn/fbl_channel.hpp"
#include "lawn/mpc_control.hpp"
#include "lawn/power_allocation.hpp"
#include "lawn/trajectory_planner.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lawn {

enum class AllocatorMode { proposed, epa };
enum class TrajectoryMode { proposed, straight_flight };

struct AoSettings {
  double tolerance = 1e-4;
  int max_iterations = 30;

  void validate() const;
  bool operator==(const AoSettings&) const = default;
};

/// Everything a slot solve needs besides the AGV states.
struct SlotContext {
  SystemMatrices sys;
  PredictionModel model;
  ControlSet control;
  ChannelParams channel;
  double snr_threshold = 0.0;
  bool ideal_channel = false;
  double altitude = 50.0;
  FlightRegion region;
  MobilityLimit mobility;
  double p_max = 1.0;
  PgdSettings pgd;
  ScaSettings sca;
  AoSettings ao;
  AllocatorMode allocator = AllocatorMode::proposed;
  TrajectoryMode trajectory = TrajectoryMode::proposed;
};

struct SlotDecision {
  std::vector<Eigen::VectorXd> delta_mu;
  std::vector<Eigen::Vector2d> first_increment;
  Eigen::VectorXd power;
  Eigen::Vector2d waypoint = Eigen::Vector2d::Zero();
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Objective at the starting point followed by one entry per AO round.
  std::vector<double> objective_trace;
  /// Survival of each link at the decided power and waypoint.
  std::vector<double> survival;
  /// Per-AGV share of the final objective.
  std::vector<double> agv_objective;
  double max_kkt_residual = 0.0;
};

/// Sub-solver failure tagged with the slot it happened in.
class SlotError : public std::runtime_error {
 public:
  SlotError(int slot, const std::string& what)
      : std::runtime_error("slot " + std::to_string(slot) + ": " + what), slot_(slot) {}
  int slot() const { return slot_; }

 private:
  int slot_;
};

/// `prev_q` anchors the speed disk and seeds the waypoint; `prev_p` seeds
/// the allocation. With the EPA allocator `prev_p` is kept as is; with
/// straight flight `prev_q` is kept as the waypoint.
SlotDecision solve_slot(const std::vector<AugmentedAgvState>& states,
                        const std::vector<ReferenceWindow>& refs, const SlotContext& ctx,
                        const Eigen::Vector2d& prev_q, const Eigen::VectorXd& prev_p,
                        int slot_index = 0);

struct EpisodeSetup {
  SlotContext ctx;
  std::vector<AugmentedAgvState> initial;
  /// Per-AGV reference samples at t = n * dt; indices past the end clamp.
  std::vector<std::vector<AugmentedAgvState>> references;
  int slots = 0;
  Eigen::Vector2d drone_start = Eigen::Vector2d::Zero();
  std::uint64_t seed = 1;
  /// Waypoint per slot for straight flight; empty otherwise.
  std::vector<Eigen::Vector2d> fixed_waypoints;
};

struct SlotRecord {
  int slot = 0;
  std::vector<AugmentedAgvState> states;  ///< at the start of the slot
  std::vector<Eigen::Vector2d> reference_xy;
  SlotDecision decision;
  std::vector<double> outage;
  std::vector<bool> delivered;
  std::vector<double> tracking_error;
  double cost = 0.0;
};

struct EpisodeLog {
  std::vector<SlotRecord> slots;
  std::vector<AugmentedAgvState> final_states;
};

ReferenceWindow reference_window(const std::vector<AugmentedAgvState>& samples, int slot,
                                 int horizon);

EpisodeLog run_episode(const EpisodeSetup& setup);

}  // namespace lawn
