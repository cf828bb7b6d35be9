#pragma once

// Air-to-ground link model: geometry, probabilistic line-of-sight, finite
// blocklength rate, and the closed-form outage probability together with
// its derivatives in transmit power and drone position.

#include <Eigen/Core>

namespace lawn {

struct ChannelParams {
  double alpha0 = 1e-5;          ///< linear power gain at 1 m (-50 dB)
  double noise_power = 1e-13;    ///< watts (-100 dBm)
  double bandwidth = 1e6;        ///< Hz
  double bler = 1e-6;            ///< target block error rate
  double blocklength = 1024;     ///< channel uses per command packet
  double a_los = 9.61;
  double b_los = 0.16;           ///< per degree
  double rate_threshold = 1e6;   ///< bits/s
  /// Drops the dispersion penalty (Shannon rate). Used as the long-block
  /// asymptote.
  bool infinite_blocklength = false;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  bool operator==(const ChannelParams&) const = default;
};

struct LinkGeometry {
  Eigen::Vector2d drone_xy = Eigen::Vector2d::Zero();
  Eigen::Vector2d agv_xy = Eigen::Vector2d::Zero();
  double altitude = 50.0;
};

struct LinkBudget {
  double distance = 0.0;
  double elevation_deg = 0.0;
  double p_los = 0.0;
  double snr_threshold = 0.0;
  double survival = 1.0;
  double outage = 0.0;
};

struct SurvivalPowerGrad {
  double survival = 1.0;
  double d_power = 0.0;
};

double distance(const LinkGeometry& geom);

/// Elevation angle in degrees; 90 when the drone is directly overhead.
double elevation_deg(const LinkGeometry& geom);

double los_probability(double theta_deg, const ChannelParams& params);

/// Inverse Gaussian Q-function.
double q_inverse(double eps);

double dispersion(double snr);

/// Achievable finite blocklength rate in bits/s. Negative for very small
/// SNR; callers clamp where needed.
double fbl_rate(double snr, const ChannelParams& params);

/// Stationary point of fbl_rate; the rate is increasing above it.
double rate_minimizer(const ChannelParams& params);

/// SNR at which fbl_rate reaches params.rate_threshold. Throws
/// std::domain_error when the threshold is not positive.
double snr_threshold(const ChannelParams& params);

/// Like snr_threshold but returns 0 for a zero rate threshold.
double required_snr(const ChannelParams& params);

/// Outage exponent numerator c with survival g(p) = exp(-max(c, 0) / p).
/// Returns +inf / -inf on the deterministic line-of-sight branch
/// (P_LoS == 1) for a failing / passing link.
double link_factor(const LinkGeometry& geom, const ChannelParams& params,
                   double snr_th);

/// Survival as a function of the link factor. p == 0 evaluates the limit.
double survival_from_factor(double c, double power);

/// d survival / d power from the link factor.
double survival_power_slope(double c, double power);

double outage_probability(const LinkGeometry& geom, double power,
                          const ChannelParams& params, double snr_th);
double outage_probability(const LinkGeometry& geom, double power,
                          const ChannelParams& params);

SurvivalPowerGrad survival_and_grad_power(const LinkGeometry& geom, double power,
                                          const ChannelParams& params,
                                          double snr_th);
SurvivalPowerGrad survival_and_grad_power(const LinkGeometry& geom, double power,
                                          const ChannelParams& params);

/// Gradient of the survival probability with respect to the drone's
/// horizontal position. Zero when the link is saturated and, by symmetry,
/// when the drone is exactly overhead.
Eigen::Vector2d survival_grad_position(const LinkGeometry& geom, double power,
                                       const ChannelParams& params,
                                       double snr_th);
Eigen::Vector2d survival_grad_position(const LinkGeometry& geom, double power,
                                       const ChannelParams& params);

LinkBudget link_budget(const LinkGeometry& geom, double power,
                       const ChannelParams& params, double snr_th);

}  // namespace lawn
