#pragma once

// Seeded generators and numeric oracles shared by the test binaries.

#include "lawn/fbl_channel.hpp"
#include "lawn/mpc_control.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>

namespace lawn::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<>(lo, hi)(rng_); }
  Eigen::Vector2d point(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi)}; }
  Eigen::VectorXd vector(int n, double lo, double hi) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }
  Eigen::MatrixXd spd(int n, double floor) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = uniform(-1.0, 1.0);
    return m * m.transpose() + floor * Eigen::MatrixXd::Identity(n, n);
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Fourth-order central difference; tolerates a larger h and so less
/// cancellation.
inline double five_point_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h);
}

inline Eigen::Vector2d central_gradient(const std::function<double(const Eigen::Vector2d&)>& f,
                                        const Eigen::Vector2d& x, double h) {
  Eigen::Vector2d g;
  for (int i = 0; i < 2; ++i) {
    Eigen::Vector2d e = Eigen::Vector2d::Zero();
    e[i] = h;
    g[i] = (f(x + e) - f(x - e)) / (2.0 * h);
  }
  return g;
}

inline double relative_gap(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

inline double relative_gap(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

/// Outage frequency from sampled small-scale fading. The received SNR is
/// rebuilt from its parts: a deterministic line-of-sight amplitude and a
/// Rayleigh-faded scattered amplitude whose power gain is Exp(1) and scales
/// with transmit power.
inline double sampled_outage(const LinkGeometry& geom, double power, const ChannelParams& params,
                             double snr_th, int samples, std::mt19937_64& rng) {
  const double d = distance(geom);
  const double p_los = los_probability(elevation_deg(geom), params);
  std::exponential_distribution<> fade(1.0);
  int outages = 0;
  for (int i = 0; i < samples; ++i) {
    const double x2 = fade(rng);
    const double snr = params.alpha0 *
                       (p_los * p_los + (1.0 - p_los) * (1.0 - p_los) * power * x2) /
                       (d * d * params.noise_power);
    if (snr < snr_th) ++outages;
  }
  return static_cast<double>(outages) / samples;
}

/// Minimizer of x'Gx + h'x over the feasible points of a grid, refined
/// around the incumbent until the spacing reaches `resolution`. Valid for
/// convex objectives over convex sets.
inline Eigen::VectorXd grid_minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                                     const std::function<bool(const Eigen::VectorXd&)>& feasible,
                                     const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                     double resolution, int points = 21) {
  const int n = static_cast<int>(lo.size());
  Eigen::VectorXd a = lo, b = hi;
  Eigen::VectorXd best = Eigen::VectorXd::Zero(n);
  double best_val = std::numeric_limits<double>::infinity();
  for (;;) {
    Eigen::VectorXd step = (b - a) / (points - 1);
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    for (;;) {
      Eigen::VectorXd x(n);
      for (int i = 0; i < n; ++i) x[i] = a[i] + step[i] * idx[static_cast<std::size_t>(i)];
      if (feasible(x)) {
        const double v = f(x);
        if (v < best_val) {
          best_val = v;
          best = x;
        }
      }
      int i = 0;
      while (i < n && ++idx[static_cast<std::size_t>(i)] == points) idx[static_cast<std::size_t>(i++)] = 0;
      if (i == n) break;
    }
    if (step.maxCoeff() <= resolution) return best;
    a = (best - 2.0 * step).cwiseMax(lo);
    b = (best + 2.0 * step).cwiseMin(hi);
  }
}

}  // namespace lawn::testing
