#pragma once

// Outage-weighted MPC cost over the prediction horizon and the per-slot
// control-increment QP.

#include "lawn/agv_dynamics.hpp"
#include "lawn/qp_solver.hpp"

#include <Eigen/Core>

namespace lawn {

/// Admissible controls: componentwise bounds on every increment and on
/// the accumulated acceleration.
struct ControlSet {
  double du_max = 1.0;  ///< m/s^2
  double u_max = 2.0;   ///< m/s^2

  void validate() const;
  bool operator==(const ControlSet&) const = default;
};

/// Cost of one AGV written as a quadratic in its survival probability g:
///   J(g) = l g^2 + 2 s g + w.
struct PowerForm {
  double l = 0.0;
  double s = 0.0;
  double w = 0.0;

  double at(double g) const { return l * g * g + 2.0 * s * g + w; }
  /// dJ/dg
  double slope(double g) const { return 2.0 * l * g + 2.0 * s; }
};

struct QpCoefficients {
  Eigen::MatrixXd g_mat;    ///< s^2 F'Q4F + Q5
  Eigen::RowVectorXd h_row; ///< 2 s (Cx - chi_ref)' Q4 F
  double m_const = 0.0;
  double survival = 1.0;

  // Survival-independent pieces.
  Eigen::MatrixXd ftqf;            ///< F'Q4F
  Eigen::RowVectorXd tracking_row; ///< (Cx - chi_ref)' Q4 F
  Eigen::MatrixXd q5;

  double objective(const Eigen::VectorXd& delta_mu) const;
  PowerForm power_form(const Eigen::VectorXd& delta_mu) const;
  QpCoefficients with_survival(double s) const;
};

struct ControlQpResult {
  Eigen::VectorXd delta_mu;
  double kkt_residual = 0.0;
  int iterations = 0;
  /// The previous acceleration lay outside the reachable set and was
  /// clamped before building the constraints.
  bool repaired = false;
};

QpCoefficients assemble_cost(const AugmentedAgvState& x, const ReferenceWindow& refs,
                             const PredictionModel& model, double survival);

/// Rows: increment bounds per step and axis, then accumulated-acceleration
/// bounds per step and axis.
LinearConstraints control_constraints(const ControlSet& set,
                                      const Eigen::Vector2d& u_prev, int horizon);

ControlQpResult solve_control_qp(const QpCoefficients& coeffs, const ControlSet& set,
                                 const Eigen::Vector2d& u_prev,
                                 const Eigen::VectorXd* warm_start = nullptr);

Eigen::Vector2d first_increment(const Eigen::VectorXd& delta_mu);

}  // namespace lawn
