#pragma once

// Double-integrator AGV kinematics in incremental-input form. The augmented
// state stacks [position, velocity, previous acceleration]; the decision
// variable is the acceleration increment.

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace lawn {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat62 = Eigen::Matrix<double, 6, 2>;

struct AgvState {
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  Eigen::Vector2d velocity = Eigen::Vector2d::Zero();
};

struct AugmentedAgvState {
  AgvState state;
  Eigen::Vector2d prev_accel = Eigen::Vector2d::Zero();

  Vec6 vector() const;
  static AugmentedAgvState from_vector(const Vec6& v);
};

struct SystemMatrices {
  Mat6 a_tilde = Mat6::Identity();
  Mat62 b_tilde = Mat62::Zero();
  double dt = 0.0;
};

struct PredictionModel {
  Eigen::MatrixXd c_stack;  ///< 6(Np+1) x 6
  Eigen::MatrixXd f_stack;  ///< 6(Np+1) x 2Np
  Eigen::MatrixXd q4;       ///< diag(Q1, ..., Q1, Q3)
  Eigen::MatrixXd q5;       ///< diag(Q2, ..., Q2)
  int horizon = 0;
};

/// Np + 1 reference targets, one per predicted step.
struct ReferenceWindow {
  std::vector<AugmentedAgvState> refs;

  Eigen::VectorXd stacked() const;
};

struct RiccatiOptions {
  int max_iterations = 10000;
  double tolerance = 1e-12;  ///< relative to 1 + |Q|
};

struct RiccatiResult {
  Eigen::MatrixXd q3;
  int iterations = 0;
  double residual = 0.0;
};

/// Raised when an iterative solver exhausts its budget.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

SystemMatrices build_system(double dt);

/// One slot of outage-gated dynamics. An undelivered command leaves the
/// previous acceleration in force.
AugmentedAgvState step(const AugmentedAgvState& x, const Eigen::Vector2d& delta_u,
                       bool delivered, const SystemMatrices& sys);

AugmentedAgvState expected_step(const AugmentedAgvState& x,
                                const Eigen::Vector2d& delta_u, double survival,
                                const SystemMatrices& sys);

/// Fixed point of the discrete Riccati map
///   Q = Q1 + A'QA - A'QB (Q2 + B'QB)^-1 B'QA
/// by value iteration from Q1, symmetrizing each iterate.
RiccatiResult solve_riccati(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                            const Eigen::MatrixXd& q1, const Eigen::MatrixXd& q2,
                            const RiccatiOptions& opts = {});

/// Right-hand side of the Riccati map, exposed for residual checks.
Eigen::MatrixXd riccati_map(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                            const Eigen::MatrixXd& q1, const Eigen::MatrixXd& q2,
                            const Eigen::MatrixXd& q);

Mat6 riccati_terminal(const SystemMatrices& sys, const Mat6& q1,
                      const Eigen::Matrix2d& q2);

PredictionModel build_prediction(const SystemMatrices& sys, const Mat6& q1,
                                 const Eigen::Matrix2d& q2, const Mat6& q3,
                                 int horizon);

/// Bernoulli delivery draw: true with probability `survival`. Consumes
/// exactly one 64-bit word from the generator.
bool draw_delivered(double survival, std::mt19937_64& rng);

/// Uniform in [0, 1) built from the top 53 bits of one generator word.
double uniform01(std::mt19937_64& rng);

}  // namespace lawn
