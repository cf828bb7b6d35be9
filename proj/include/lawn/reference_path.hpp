#pragma once

// Reference trajectories sampled once per slot.

#include "lawn/agv_dynamics.hpp"
#include "lawn/scenario.hpp"

#include <vector>

namespace lawn {

/// Position of the path at time t.
Eigen::Vector2d path_position(const PathSpec& spec, double t);

/// `count` samples at t = n * dt. Velocities are forward differences of the
/// sampled positions (the last sample repeats the previous one); the
/// acceleration slot is zero.
std::vector<AugmentedAgvState> reference_path(const PathSpec& spec, int count, double dt);

}  // namespace lawn
