#include "lawn/reference_path.hpp"

#include <cmath>
#include <stdexcept>

namespace lawn {

Eigen::Vector2d path_position(const PathSpec& spec, double t) {
  switch (spec.kind) {
    case PathSpec::Kind::stationary:
      if (spec.points.empty()) throw std::invalid_argument("stationary path has no point");
      return spec.points.front();
    case PathSpec::Kind::circle: {
      const double a = spec.phase + spec.omega * t;
      return spec.center + spec.radius * Eigen::Vector2d(std::cos(a), std::sin(a));
    }
    case PathSpec::Kind::waypoints: {
      if (spec.points.size() < 2) throw std::invalid_argument("waypoint path needs at least 2 points");
      if (!(spec.speed > 0.0)) throw std::invalid_argument("waypoint speed must be positive");
      double remaining = std::max(t, 0.0) * spec.speed;
      for (std::size_t i = 0; i + 1 < spec.points.size(); ++i) {
        const Eigen::Vector2d seg = spec.points[i + 1] - spec.points[i];
        const double len = seg.norm();
        if (remaining <= len) {
          return len > 0.0 ? Eigen::Vector2d(spec.points[i] + seg * (remaining / len))
                           : spec.points[i];
        }
        remaining -= len;
      }
      return spec.points.back();
    }
  }
  throw std::invalid_argument("unknown path kind");
}

std::vector<AugmentedAgvState> reference_path(const PathSpec& spec, int count, double dt) {
  if (count < 1) throw std::invalid_argument("reference_path: count must be >= 1");
  if (!(dt > 0.0)) throw std::invalid_argument("reference_path: dt must be positive");
  std::vector<AugmentedAgvState> out(static_cast<std::size_t>(count));
  for (int n = 0; n < count; ++n) {
    out[static_cast<std::size_t>(n)].state.position = path_position(spec, n * dt);
  }
  for (int n = 0; n + 1 < count; ++n) {
    auto& s = out[static_cast<std::size_t>(n)].state;
    s.velocity = (out[static_cast<std::size_t>(n + 1)].state.position - s.position) / dt;
  }
  if (count >= 2) out.back().state.velocity = out[out.size() - 2].state.velocity;
  return out;
}

}  // namespace lawn
