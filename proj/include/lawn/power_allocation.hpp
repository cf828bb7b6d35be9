#pragma once

// Transmit-power allocation: projected gradient descent with Armijo
// backtracking over {p >= 0, sum p <= P_max}.

#include "lawn/mpc_control.hpp"

#include <Eigen/Core>

#include <vector>

namespace lawn {

struct PowerTerm {
  PowerForm form;
  /// Survival is exp(-max(c, 0) / p); see link_factor().
  double link_factor = 0.0;
};

struct PowerProblem {
  std::vector<PowerTerm> terms;
  double p_max = 1.0;
};

struct PgdSettings {
  double initial_step = 1.0;
  double armijo = 1e-4;
  double backtrack = 1.0;  ///< step shrinks by 1 / (1 + backtrack)
  double tolerance = 1e-6;
  int max_iterations = 500;
  /// Keep shrinking the step across outer iterations instead of resetting
  /// it each time.
  bool literal_alg1 = false;

  void validate() const;
  bool operator==(const PgdSettings&) const = default;
};

struct PgdResult {
  Eigen::VectorXd power;
  int iterations = 0;
  /// Backtracking fell below 1e-15 without meeting the Armijo condition.
  bool step_underflow = false;
  std::vector<double> cost_trace;
};

/// Throws std::domain_error on negative or non-finite powers. A zero
/// component evaluates the p -> 0 limit of the survival.
double power_cost(const PowerProblem& problem, const Eigen::VectorXd& p);

Eigen::VectorXd power_gradient(const PowerProblem& problem, const Eigen::VectorXd& p);

/// Euclidean projection onto {p >= 0, sum p <= p_max}.
Eigen::VectorXd project_capped_simplex(const Eigen::VectorXd& v, double p_max);

PgdResult pgd_allocate(const PowerProblem& problem, const PgdSettings& settings,
                       const Eigen::VectorXd& p0);

Eigen::VectorXd equal_power(int count, double p_max);

}  // namespace lawn
