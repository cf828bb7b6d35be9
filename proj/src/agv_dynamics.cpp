#include "lawn/agv_dynamics.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <cmath>
#include <stdexcept>
#include <string>

namespace lawn {

Vec6 AugmentedAgvState::vector() const {
  Vec6 v;
  v << state.position, state.velocity, prev_accel;
  return v;
}

AugmentedAgvState AugmentedAgvState::from_vector(const Vec6& v) {
  AugmentedAgvState x;
  x.state.position = v.segment<2>(0);
  x.state.velocity = v.segment<2>(2);
  x.prev_accel = v.segment<2>(4);
  return x;
}

Eigen::VectorXd ReferenceWindow::stacked() const {
  Eigen::VectorXd out(6 * static_cast<Eigen::Index>(refs.size()));
  for (std::size_t i = 0; i < refs.size(); ++i) {
    out.segment<6>(6 * static_cast<Eigen::Index>(i)) = refs[i].vector();
  }
  return out;
}

SystemMatrices build_system(double dt) {
  if (!(dt > 0.0)) throw std::domain_error("build_system: dt must be positive");

  Eigen::Matrix4d a = Eigen::Matrix4d::Identity();
  a(0, 2) = dt;
  a(1, 3) = dt;
  Eigen::Matrix<double, 4, 2> b = Eigen::Matrix<double, 4, 2>::Zero();
  b(0, 0) = 0.5 * dt * dt;
  b(1, 1) = 0.5 * dt * dt;
  b(2, 0) = dt;
  b(3, 1) = dt;

  SystemMatrices sys;
  sys.dt = dt;
  sys.a_tilde.setZero();
  sys.a_tilde.topLeftCorner<4, 4>() = a;
  sys.a_tilde.topRightCorner<4, 2>() = b;
  sys.a_tilde.bottomRightCorner<2, 2>().setIdentity();
  sys.b_tilde.topRows<4>() = b;
  sys.b_tilde.bottomRows<2>().setIdentity();
  return sys;
}

AugmentedAgvState step(const AugmentedAgvState& x, const Eigen::Vector2d& delta_u,
                       bool delivered, const SystemMatrices& sys) {
  Vec6 next = sys.a_tilde * x.vector();
  if (delivered) next += sys.b_tilde * delta_u;
  return AugmentedAgvState::from_vector(next);
}

AugmentedAgvState expected_step(const AugmentedAgvState& x,
                                const Eigen::Vector2d& delta_u, double survival,
                                const SystemMatrices& sys) {
  const Vec6 next = sys.a_tilde * x.vector() + survival * (sys.b_tilde * delta_u);
  return AugmentedAgvState::from_vector(next);
}

Eigen::MatrixXd riccati_map(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                            const Eigen::MatrixXd& q1, const Eigen::MatrixXd& q2,
                            const Eigen::MatrixXd& q) {
  const Eigen::MatrixXd qa = q * a;
  const Eigen::MatrixXd btqa = b.transpose() * qa;
  const Eigen::MatrixXd inner = q2 + b.transpose() * q * b;
  return q1 + a.transpose() * qa - btqa.transpose() * inner.ldlt().solve(btqa);
}

RiccatiResult solve_riccati(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                            const Eigen::MatrixXd& q1, const Eigen::MatrixXd& q2,
                            const RiccatiOptions& opts) {
  if (a.rows() != a.cols() || b.rows() != a.rows() || q1.rows() != a.rows() ||
      q1.cols() != a.cols() || q2.rows() != b.cols() || q2.cols() != b.cols()) {
    throw std::invalid_argument("solve_riccati: dimension mismatch");
  }

  RiccatiResult out;
  Eigen::MatrixXd q = q1;
  for (int it = 0; it < opts.max_iterations; ++it) {
    Eigen::MatrixXd next = riccati_map(a, b, q1, q2, q);
    const double residual = (next - q).norm();
    if (residual <= opts.tolerance * (1.0 + q.norm())) {
      out.q3 = q;
      out.iterations = it;
      out.residual = residual;
      return out;
    }
    q = 0.5 * (next + next.transpose());
  }
  throw SolverError("solve_riccati: no convergence after " +
                    std::to_string(opts.max_iterations) + " iterations");
}

Mat6 riccati_terminal(const SystemMatrices& sys, const Mat6& q1,
                      const Eigen::Matrix2d& q2) {
  return solve_riccati(sys.a_tilde, sys.b_tilde, q1, q2).q3;
}

PredictionModel build_prediction(const SystemMatrices& sys, const Mat6& q1,
                                 const Eigen::Matrix2d& q2, const Mat6& q3,
                                 int horizon) {
  if (horizon < 1) throw std::invalid_argument("build_prediction: horizon must be >= 1");
  const Eigen::Index np = horizon;

  PredictionModel m;
  m.horizon = horizon;
  m.c_stack = Eigen::MatrixXd::Zero(6 * (np + 1), 6);
  m.f_stack = Eigen::MatrixXd::Zero(6 * (np + 1), 2 * np);
  m.q4 = Eigen::MatrixXd::Zero(6 * (np + 1), 6 * (np + 1));
  m.q5 = Eigen::MatrixXd::Zero(2 * np, 2 * np);

  // powers[i] = A^i
  std::vector<Mat6> powers(static_cast<std::size_t>(np + 1));
  powers[0] = Mat6::Identity();
  for (Eigen::Index i = 1; i <= np; ++i) powers[i] = sys.a_tilde * powers[i - 1];

  for (Eigen::Index i = 0; i <= np; ++i) {
    m.c_stack.block<6, 6>(6 * i, 0) = powers[i];
    for (Eigen::Index j = 0; j < i; ++j) {
      m.f_stack.block<6, 2>(6 * i, 2 * j) = powers[i - 1 - j] * sys.b_tilde;
    }
    m.q4.block<6, 6>(6 * i, 6 * i) = (i < np) ? q1 : q3;
  }
  for (Eigen::Index j = 0; j < np; ++j) m.q5.block<2, 2>(2 * j, 2 * j) = q2;
  return m;
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

bool draw_delivered(double survival, std::mt19937_64& rng) {
  return uniform01(rng) < survival;
}

}  // namespace lawn
