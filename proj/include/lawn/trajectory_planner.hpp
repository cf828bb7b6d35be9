#pragma once

// Drone waypoint selection by successive linearization of the slot cost
// over the speed disk intersected with the flight rectangle.

#include "lawn/fbl_channel.hpp"
#include "lawn/mpc_control.hpp"

#include <Eigen/Core>

#include <vector>

namespace lawn {

struct FlightRegion {
  double x_min = 0.0;
  double x_max = 200.0;
  double y_min = 0.0;
  double y_max = 200.0;

  void validate() const;
  bool operator==(const FlightRegion&) const = default;
  bool contains(const Eigen::Vector2d& q, double slack = 1e-9) const;
};

struct MobilityLimit {
  double v_max = 10.0;  ///< m/s
  double dt = 0.5;      ///< s

  void validate() const;
  double radius() const { return v_max * dt; }
};

struct SceneLink {
  PowerForm form;
  Eigen::Vector2d agv_xy = Eigen::Vector2d::Zero();
  double power = 0.0;
};

/// Per-AGV cost coefficients and powers with the drone position left free.
struct PlanningScene {
  std::vector<SceneLink> links;
  ChannelParams params;
  double altitude = 50.0;
  double snr_threshold = 0.0;
  /// Every link delivers with certainty; the cost is flat in q.
  bool ideal_channel = false;

  double survival(std::size_t k, const Eigen::Vector2d& q) const;
  double cost(const Eigen::Vector2d& q) const;
};

struct ScaSettings {
  double tolerance = 1e-6;
  int max_iterations = 30;

  void validate() const;
  bool operator==(const ScaSettings&) const = default;
};

struct ScaResult {
  Eigen::Vector2d waypoint = Eigen::Vector2d::Zero();
  int iterations = 0;
  std::vector<double> cost_trace;
};

Eigen::Vector2d cost_grad_q(const PlanningScene& scene, const Eigen::Vector2d& q);

/// Exact minimizer of grad'(q - q_prev) over the disk of radius
/// limit.radius() around q_prev intersected with the region.
Eigen::Vector2d minimize_linear_step(const Eigen::Vector2d& grad,
                                     const Eigen::Vector2d& q_prev,
                                     const FlightRegion& region,
                                     const MobilityLimit& limit);

/// Iterates linearize / solve from q0. The speed disk is centred on
/// `anchor` (the previous slot's waypoint), which defaults to q0. A
/// candidate is accepted only if the true cost does not increase; otherwise
/// the step toward it is halved.
ScaResult sca_plan(const PlanningScene& scene, const Eigen::Vector2d& q0,
                   const FlightRegion& region, const MobilityLimit& limit,
                   const ScaSettings& settings,
                   const Eigen::Vector2d* anchor = nullptr);

}  // namespace lawn
