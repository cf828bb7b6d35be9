#include "lawn/fbl_channel.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lawn {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw std::invalid_argument(std::string(field) + ": " + what);
}

double penalty_coefficient(const ChannelParams& params) {
  if (params.infinite_blocklength || params.bler == 0.5) return 0.0;
  return q_inverse(params.bler) / std::sqrt(params.blocklength);
}

}  // namespace

void ChannelParams::validate() const {
  require(alpha0 > 0.0, "channel.alpha0", "must be positive");
  require(noise_power > 0.0, "channel.noise_power", "must be positive");
  require(bandwidth > 0.0, "channel.bandwidth", "must be positive");
  require(bler > 0.0 && bler < 1.0, "channel.bler", "must lie in (0, 1)");
  require(blocklength >= 1.0, "channel.blocklength", "must be at least 1");
  require(std::isfinite(a_los) && a_los > 0.0, "channel.a_los", "must be positive");
  require(std::isfinite(b_los) && b_los > 0.0, "channel.b_los", "must be positive");
  require(rate_threshold >= 0.0, "channel.rate_threshold", "must be nonnegative");
}

double distance(const LinkGeometry& geom) {
  const double horizontal = (geom.drone_xy - geom.agv_xy).norm();
  return std::hypot(horizontal, geom.altitude);
}

double elevation_deg(const LinkGeometry& geom) {
  const double horizontal = (geom.drone_xy - geom.agv_xy).norm();
  return std::atan2(geom.altitude, horizontal) * kRadToDeg;
}

double los_probability(double theta_deg, const ChannelParams& params) {
  return 1.0 / (1.0 + params.a_los * std::exp(-params.b_los * (theta_deg - params.a_los)));
}

double q_inverse(double eps) {
  if (eps == 0.5) return 0.0;
  return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * eps);
}

double dispersion(double snr) {
  const double s = 1.0 + snr;
  return 1.0 - 1.0 / (s * s);
}

double fbl_rate(double snr, const ChannelParams& params) {
  const double shannon = std::log2(1.0 + snr);
  const double coeff = penalty_coefficient(params);
  if (coeff == 0.0) return params.bandwidth * shannon;
  return params.bandwidth * (shannon - std::sqrt(dispersion(snr)) * coeff);
}

double rate_minimizer(const ChannelParams& params) {
  // d/dG [log2(1+G) - coeff*sqrt(V)] = 0 reduces to
  // (1+G) sqrt((1+G)^2 - 1) = coeff * ln 2.
  const double k = penalty_coefficient(params) * std::numbers::ln2;
  if (k == 0.0) return 0.0;
  const double z = 0.5 + std::sqrt(0.25 + k * k);
  return std::sqrt(z) - 1.0;
}

double snr_threshold(const ChannelParams& params) {
  params.validate();
  const double target = params.rate_threshold;
  if (!(target > 0.0)) {
    throw std::domain_error("snr_threshold: rate threshold must be positive");
  }
  if (penalty_coefficient(params) == 0.0) {
    return std::exp2(target / params.bandwidth) - 1.0;
  }

  // fbl_rate is negative at the minimizer and increasing beyond it.
  double lo = rate_minimizer(params) + 1e-12;
  double hi = std::max(2.0 * lo, 1.0);
  while (fbl_rate(hi, params) < target) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw std::domain_error("snr_threshold: bracket overflow");
  }
  for (int i = 0; i < 2000; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (fbl_rate(mid, params) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double err_lo = std::abs(fbl_rate(lo, params) - target);
  const double err_hi = std::abs(fbl_rate(hi, params) - target);
  return err_lo < err_hi ? lo : hi;
}

double required_snr(const ChannelParams& params) {
  return params.rate_threshold > 0.0 ? snr_threshold(params) : 0.0;
}

double link_factor(const LinkGeometry& geom, const ChannelParams& params,
                   double snr_th) {
  const double d = distance(geom);
  const double p_los = los_probability(elevation_deg(geom), params);
  const double margin = d * d * params.noise_power * snr_th - params.alpha0 * p_los * p_los;
  const double nlos = 1.0 - p_los;
  if (nlos == 0.0) {
    // Deterministic LoS link: the fading term carries no weight.
    return margin > 0.0 ? std::numeric_limits<double>::infinity()
                        : -std::numeric_limits<double>::infinity();
  }
  return margin / (params.alpha0 * nlos * nlos);
}

double survival_from_factor(double c, double power) {
  if (!(c > 0.0)) return 1.0;
  if (power <= 0.0 || std::isinf(c)) return 0.0;
  return std::exp(-c / power);
}

double survival_power_slope(double c, double power) {
  if (!(c > 0.0) || std::isinf(c) || power <= 0.0) return 0.0;
  return c / (power * power) * std::exp(-c / power);
}

double outage_probability(const LinkGeometry& geom, double power,
                          const ChannelParams& params, double snr_th) {
  return 1.0 - survival_from_factor(link_factor(geom, params, snr_th), power);
}

double outage_probability(const LinkGeometry& geom, double power,
                          const ChannelParams& params) {
  return outage_probability(geom, power, params, required_snr(params));
}

SurvivalPowerGrad survival_and_grad_power(const LinkGeometry& geom, double power,
                                          const ChannelParams& params,
                                          double snr_th) {
  const double c = link_factor(geom, params, snr_th);
  return {survival_from_factor(c, power), survival_power_slope(c, power)};
}

SurvivalPowerGrad survival_and_grad_power(const LinkGeometry& geom, double power,
                                          const ChannelParams& params) {
  return survival_and_grad_power(geom, power, params, required_snr(params));
}

Eigen::Vector2d survival_grad_position(const LinkGeometry& geom, double power,
                                       const ChannelParams& params,
                                       double snr_th) {
  const Eigen::Vector2d offset = geom.drone_xy - geom.agv_xy;
  const double rho = offset.norm();
  const double h = geom.altitude;
  const double c = link_factor(geom, params, snr_th);
  if (!(c > 0.0) || std::isinf(c) || power <= 0.0 || rho == 0.0) {
    return Eigen::Vector2d::Zero();
  }

  const double theta = std::atan2(h, rho) * kRadToDeg;
  const double p_los = los_probability(theta, params);
  const double dtheta_drho = -h / (rho * rho + h * h) * kRadToDeg;
  const double dplos_dtheta = p_los * (1.0 - p_los) * params.b_los;
  const Eigen::Vector2d dplos = dplos_dtheta * dtheta_drho * offset / rho;

  const double d2 = rho * rho + h * h;
  const double num = d2 * params.noise_power * snr_th - params.alpha0 * p_los * p_los;
  const double den = params.alpha0 * (1.0 - p_los) * (1.0 - p_los);
  const Eigen::Vector2d dnum =
      2.0 * params.noise_power * snr_th * offset - 2.0 * params.alpha0 * p_los * dplos;
  const Eigen::Vector2d dden = -2.0 * params.alpha0 * (1.0 - p_los) * dplos;
  const Eigen::Vector2d dc = (dnum - (num / den) * dden) / den;

  const double g = std::exp(-c / power);
  return -(g / power) * dc;
}

Eigen::Vector2d survival_grad_position(const LinkGeometry& geom, double power,
                                       const ChannelParams& params) {
  return survival_grad_position(geom, power, params, required_snr(params));
}

LinkBudget link_budget(const LinkGeometry& geom, double power,
                       const ChannelParams& params, double snr_th) {
  LinkBudget b;
  b.distance = distance(geom);
  b.elevation_deg = elevation_deg(geom);
  b.p_los = los_probability(b.elevation_deg, params);
  b.snr_threshold = snr_th;
  b.survival = survival_from_factor(link_factor(geom, params, snr_th), power);
  b.outage = 1.0 - b.survival;
  return b;
}

}  // namespace lawn
