#include "lawn/mpc_control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lawn {

void ControlSet::validate() const {
  if (!(du_max > 0.0)) throw std::invalid_argument("control.du_max: must be positive");
  if (!(u_max > 0.0)) throw std::invalid_argument("control.u_max: must be positive");
}

double QpCoefficients::objective(const Eigen::VectorXd& delta_mu) const {
  return delta_mu.dot(g_mat * delta_mu) + h_row.dot(delta_mu) + m_const;
}

PowerForm QpCoefficients::power_form(const Eigen::VectorXd& delta_mu) const {
  PowerForm f;
  f.l = delta_mu.dot(ftqf * delta_mu);
  f.s = tracking_row.dot(delta_mu);
  f.w = delta_mu.dot(q5 * delta_mu) + m_const;
  return f;
}

QpCoefficients QpCoefficients::with_survival(double s) const {
  QpCoefficients out = *this;
  out.survival = s;
  out.g_mat = s * s * ftqf + q5;
  out.h_row = 2.0 * s * tracking_row;
  return out;
}

QpCoefficients assemble_cost(const AugmentedAgvState& x, const ReferenceWindow& refs,
                             const PredictionModel& model, double survival) {
  const Eigen::Index rows = model.c_stack.rows();
  if (static_cast<Eigen::Index>(refs.refs.size()) * 6 != rows) {
    throw std::invalid_argument("assemble_cost: reference window length must be horizon + 1");
  }
  if (!(survival >= 0.0 && survival <= 1.0)) {
    throw std::invalid_argument("assemble_cost: survival must lie in [0, 1]");
  }

  const Eigen::VectorXd err = model.c_stack * x.vector() - refs.stacked();
  const Eigen::VectorXd q4_err = model.q4 * err;

  QpCoefficients c;
  c.ftqf = model.f_stack.transpose() * model.q4 * model.f_stack;
  c.ftqf = 0.5 * (c.ftqf + c.ftqf.transpose());
  c.tracking_row = (model.f_stack.transpose() * q4_err).transpose();
  c.q5 = model.q5;
  c.m_const = err.dot(q4_err);
  return c.with_survival(survival);
}

LinearConstraints control_constraints(const ControlSet& set,
                                      const Eigen::Vector2d& u_prev, int horizon) {
  const Eigen::Index n = 2 * static_cast<Eigen::Index>(horizon);
  LinearConstraints cons;
  cons.a = Eigen::MatrixXd::Zero(2 * n, n);
  cons.lower.resize(2 * n);
  cons.upper.resize(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    cons.a(i, i) = 1.0;
    cons.lower[i] = -set.du_max;
    cons.upper[i] = set.du_max;
  }
  for (Eigen::Index step = 0; step < horizon; ++step) {
    for (Eigen::Index axis = 0; axis < 2; ++axis) {
      const Eigen::Index row = n + 2 * step + axis;
      for (Eigen::Index j = 0; j <= step; ++j) cons.a(row, 2 * j + axis) = 1.0;
      cons.lower[row] = -set.u_max - u_prev[axis];
      cons.upper[row] = set.u_max - u_prev[axis];
    }
  }
  return cons;
}

namespace {

// Walks each axis back toward the acceleration box as fast as the
// increment bound allows. Returns false when the first step cannot reach it.
bool feasible_start(const ControlSet& set, const Eigen::Vector2d& u_prev, int horizon,
                    Eigen::VectorXd& out) {
  out.setZero(2 * horizon);
  bool ok = true;
  for (int axis = 0; axis < 2; ++axis) {
    double u = u_prev[axis];
    for (int step = 0; step < horizon; ++step) {
      const double target = std::clamp(u, -set.u_max, set.u_max);
      const double du = std::clamp(target - u, -set.du_max, set.du_max);
      out[2 * step + axis] = du;
      u += du;
      if (std::abs(u) > set.u_max) ok = false;
    }
  }
  return ok;
}

}  // namespace

ControlQpResult solve_control_qp(const QpCoefficients& coeffs, const ControlSet& set,
                                 const Eigen::Vector2d& u_prev,
                                 const Eigen::VectorXd* warm_start) {
  const Eigen::Index n = coeffs.g_mat.rows();
  if (n % 2 != 0 || coeffs.h_row.size() != n) {
    throw std::invalid_argument("solve_control_qp: coefficient dimensions must be 2Np");
  }
  const int horizon = static_cast<int>(n / 2);

  ControlQpResult result;
  Eigen::Vector2d u_eff = u_prev;
  Eigen::VectorXd start;
  if (!feasible_start(set, u_prev, horizon, start)) {
    u_eff = u_prev.cwiseMax(-set.u_max).cwiseMin(set.u_max);
    start.setZero(n);
    result.repaired = true;
  }
  const LinearConstraints cons = control_constraints(set, u_eff, horizon);
  if (warm_start && warm_start->size() == n && max_violation(cons, *warm_start) <= 1e-12) {
    start = *warm_start;
  }

  const QpSolution sol = solve_qp(coeffs.g_mat, coeffs.h_row.transpose(), cons, start);
  result.delta_mu = sol.x;
  result.kkt_residual = sol.kkt_residual;
  result.iterations = sol.iterations;
  return result;
}

Eigen::Vector2d first_increment(const Eigen::VectorXd& delta_mu) {
  if (delta_mu.size() < 2) throw std::invalid_argument("first_increment: need at least 2 entries");
  return delta_mu.head<2>();
}

}  // namespace lawn
