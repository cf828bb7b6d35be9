#include "lawn/trajectory_planner.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lawn {

void FlightRegion::validate() const {
  if (!(x_min < x_max)) throw std::invalid_argument("region: x_min must be below x_max");
  if (!(y_min < y_max)) throw std::invalid_argument("region: y_min must be below y_max");
}

bool FlightRegion::contains(const Eigen::Vector2d& q, double slack) const {
  return q.x() >= x_min - slack && q.x() <= x_max + slack && q.y() >= y_min - slack &&
         q.y() <= y_max + slack;
}

void MobilityLimit::validate() const {
  if (!(v_max > 0.0)) throw std::invalid_argument("drone_vmax: must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("slot_duration_s: must be positive");
}

void ScaSettings::validate() const {
  if (!(tolerance > 0.0)) throw std::invalid_argument("sca.tolerance: must be positive");
  if (max_iterations < 1) throw std::invalid_argument("sca.max_iterations: must be >= 1");
}

double PlanningScene::survival(std::size_t k, const Eigen::Vector2d& q) const {
  if (ideal_channel) return 1.0;
  const SceneLink& link = links[k];
  const LinkGeometry geom{q, link.agv_xy, altitude};
  return survival_from_factor(link_factor(geom, params, snr_threshold), link.power);
}

double PlanningScene::cost(const Eigen::Vector2d& q) const {
  double total = 0.0;
  for (std::size_t k = 0; k < links.size(); ++k) total += links[k].form.at(survival(k, q));
  return total;
}

Eigen::Vector2d cost_grad_q(const PlanningScene& scene, const Eigen::Vector2d& q) {
  Eigen::Vector2d grad = Eigen::Vector2d::Zero();
  if (scene.ideal_channel) return grad;
  for (std::size_t k = 0; k < scene.links.size(); ++k) {
    const SceneLink& link = scene.links[k];
    const LinkGeometry geom{q, link.agv_xy, scene.altitude};
    const double g = scene.survival(k, q);
    grad += link.form.slope(g) *
            survival_grad_position(geom, link.power, scene.params, scene.snr_threshold);
  }
  return grad;
}

Eigen::Vector2d minimize_linear_step(const Eigen::Vector2d& grad,
                                     const Eigen::Vector2d& q_prev,
                                     const FlightRegion& region,
                                     const MobilityLimit& limit) {
  const double gnorm = grad.norm();
  if (gnorm == 0.0 || !std::isfinite(gnorm)) return q_prev;
  const double r = limit.radius();

  const Eigen::Vector2d disk_opt = q_prev - r * grad / gnorm;
  if (region.contains(disk_opt, 0.0)) return disk_opt;

  // Otherwise the optimum sits on an extreme point of disk ∩ box: a box
  // corner inside the disk or a circle / box-edge crossing.
  Eigen::Vector2d best = q_prev;
  double best_val = 0.0;
  auto consider = [&](const Eigen::Vector2d& q) {
    Eigen::Vector2d c = q;
    const Eigen::Vector2d off = c - q_prev;
    if (off.norm() > r) c = q_prev + off * (r / off.norm());
    if (!region.contains(c, 1e-12) || (c - q_prev).norm() > r * (1.0 + 1e-12)) return;
    const double val = grad.dot(c - q_prev);
    if (val < best_val) {
      best_val = val;
      best = c;
    }
  };

  const std::array<Eigen::Vector2d, 4> corners = {
      Eigen::Vector2d(region.x_min, region.y_min), Eigen::Vector2d(region.x_min, region.y_max),
      Eigen::Vector2d(region.x_max, region.y_min), Eigen::Vector2d(region.x_max, region.y_max)};
  for (const auto& c : corners) {
    if ((c - q_prev).norm() <= r) consider(c);
  }
  for (double x : {region.x_min, region.x_max}) {
    const double dx = x - q_prev.x();
    const double rem = r * r - dx * dx;
    if (rem < 0.0) continue;
    const double dy = std::sqrt(rem);
    for (double y : {q_prev.y() - dy, q_prev.y() + dy}) {
      if (y >= region.y_min && y <= region.y_max) consider({x, y});
    }
  }
  for (double y : {region.y_min, region.y_max}) {
    const double dy = y - q_prev.y();
    const double rem = r * r - dy * dy;
    if (rem < 0.0) continue;
    const double dx = std::sqrt(rem);
    for (double x : {q_prev.x() - dx, q_prev.x() + dx}) {
      if (x >= region.x_min && x <= region.x_max) consider({x, y});
    }
  }
  return best;
}

ScaResult sca_plan(const PlanningScene& scene, const Eigen::Vector2d& q0,
                   const FlightRegion& region, const MobilityLimit& limit,
                   const ScaSettings& settings, const Eigen::Vector2d* anchor) {
  const Eigen::Vector2d center = anchor ? *anchor : q0;
  ScaResult res;
  Eigen::Vector2d q = q0;
  double cost = scene.cost(q);
  res.cost_trace.push_back(cost);

  for (int it = 0; it < settings.max_iterations; ++it) {
    res.iterations = it + 1;
    const Eigen::Vector2d grad = cost_grad_q(scene, q);
    const Eigen::Vector2d target = minimize_linear_step(grad, center, region, limit);
    const Eigen::Vector2d dir = target - q;
    if (dir.norm() == 0.0 || grad.dot(dir) >= 0.0) break;

    bool accepted = false;
    double t = 1.0;
    Eigen::Vector2d trial = q;
    double trial_cost = cost;
    for (int halving = 0; halving < 40; ++halving, t *= 0.5) {
      trial = q + t * dir;
      trial_cost = scene.cost(trial);
      if (trial_cost <= cost) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;

    const double decrease = cost - trial_cost;
    q = trial;
    cost = trial_cost;
    res.cost_trace.push_back(cost);
    if (decrease < settings.tolerance) break;
  }
  res.waypoint = q;
  return res;
}

}  // namespace lawn
