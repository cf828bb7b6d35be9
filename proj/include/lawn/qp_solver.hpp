#pragma once

// Dense primal active-set solver for strictly convex QPs
//   minimize  x' G x + h' x   subject to  lower <= A x <= upper
// started from a feasible point.

#include <Eigen/Core>

namespace lawn {

struct LinearConstraints {
  Eigen::MatrixXd a;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

struct QpOptions {
  double step_tolerance = 1e-10;
  double feasibility_tolerance = 1e-9;
  int max_iterations = 0;  ///< 0 selects 50 * (n + m)
};

struct QpSolution {
  Eigen::VectorXd x;
  /// Signed multipliers per constraint row: grad + A' lambda = 0 with
  /// lambda >= 0 on active upper bounds and <= 0 on active lower bounds.
  Eigen::VectorXd multipliers;
  int iterations = 0;
  double kkt_residual = 0.0;
};

/// Throws std::invalid_argument when x0 is infeasible or G is not positive
/// definite, SolverError when the iteration budget is exhausted.
QpSolution solve_qp(const Eigen::MatrixXd& g, const Eigen::VectorXd& h,
                    const LinearConstraints& cons, const Eigen::VectorXd& x0,
                    const QpOptions& opts = {});

/// Largest violation among stationarity, primal feasibility, multiplier
/// sign and complementary slackness.
double kkt_residual(const Eigen::MatrixXd& g, const Eigen::VectorXd& h,
                    const LinearConstraints& cons, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& multipliers);

double max_violation(const LinearConstraints& cons, const Eigen::VectorXd& x);

}  // namespace lawn
