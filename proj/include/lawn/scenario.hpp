#pragma once

// Scenario configuration and its key = value text format.

#include "lawn/ao_orchestrator.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace lawn {

enum class ChannelMode { fbl, ibl, ideal };

/// Reference path of one AGV.
///   waypoints <speed> : x y, x y, ...   constant-speed polyline, holds the end
///   stationary x y
///   circle cx cy radius omega phase     omega in rad/s, phase in rad
struct PathSpec {
  enum class Kind { waypoints, stationary, circle };
  Kind kind = Kind::stationary;
  double speed = 0.0;
  std::vector<Eigen::Vector2d> points;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 0.0;
  double omega = 0.0;
  double phase = 0.0;

  bool operator==(const PathSpec&) const = default;
};

PathSpec parse_path(const std::string& text);
std::string format_path(const PathSpec& spec);

struct StraightFlight {
  double speed = 3.0;        ///< m/s
  double heading_deg = 0.0;  ///< counterclockwise from +x

  bool operator==(const StraightFlight&) const = default;
};

struct ScenarioConfig {
  double duration_s = 60.0;
  int slots = 120;
  double slot_duration_s = 0.5;
  double altitude = 50.0;
  FlightRegion region;
  Eigen::Vector2d drone_start{0.0, 100.0};
  double drone_vmax = 20.0;
  std::vector<PathSpec> agv_paths;

  ChannelParams channel;
  ChannelMode channel_mode = ChannelMode::fbl;
  ControlSet control;
  Vec6 q1_diag = Vec6::Ones();
  Eigen::Vector2d q2_diag = Eigen::Vector2d::Ones();
  int horizon = 10;
  double power_budget = 1.0;

  PgdSettings pgd;
  ScaSettings sca;
  AoSettings ao;
  std::uint64_t seed = 1;
  AllocatorMode allocator = AllocatorMode::proposed;
  TrajectoryMode trajectory_mode = TrajectoryMode::proposed;
  StraightFlight straight_flight;

  int agv_count() const { return static_cast<int>(agv_paths.size()); }

  /// Throws std::invalid_argument whose message starts with the field path.
  void validate() const;
  bool operator==(const ScenarioConfig&) const = default;
};

/// Configuration with every field at its default, including the four
/// default AGV paths.
ScenarioConfig default_config();

/// Parses the text format. With `fill_defaults` unset every field must be
/// given. The result is validated.
ScenarioConfig parse_config(const std::string& text, bool fill_defaults = true);
ScenarioConfig load_config(const std::string& path, bool fill_defaults = true);

/// Writes every field; doubles are printed with 17 significant digits so
/// that parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& cfg);

std::string to_string(ChannelMode m);
std::string to_string(AllocatorMode m);
std::string to_string(TrajectoryMode m);
ChannelMode parse_channel_mode(const std::string& s);
AllocatorMode parse_allocator(const std::string& s);
TrajectoryMode parse_trajectory_mode(const std::string& s);

}  // namespace lawn
