#include "lawn/qp_solver.hpp"

#include "lawn/agv_dynamics.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace lawn {

namespace {

struct ActiveRow {
  Eigen::Index row;
  int side;  // +1 upper, -1 lower
};

}  // namespace

double max_violation(const LinearConstraints& cons, const Eigen::VectorXd& x) {
  if (cons.a.rows() == 0) return 0.0;
  const Eigen::VectorXd ax = cons.a * x;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < ax.size(); ++i) {
    worst = std::max({worst, ax[i] - cons.upper[i], cons.lower[i] - ax[i]});
  }
  return worst;
}

double kkt_residual(const Eigen::MatrixXd& g, const Eigen::VectorXd& h,
                    const LinearConstraints& cons, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& multipliers) {
  Eigen::VectorXd station = 2.0 * g * x + h;
  if (cons.a.rows() > 0) station += cons.a.transpose() * multipliers;
  double res = station.lpNorm<Eigen::Infinity>();
  res = std::max(res, max_violation(cons, x));
  if (cons.a.rows() == 0) return res;

  const Eigen::VectorXd ax = cons.a * x;
  for (Eigen::Index i = 0; i < ax.size(); ++i) {
    const double lam = multipliers[i];
    if (lam > 0.0) {
      res = std::max(res, lam * std::abs(cons.upper[i] - ax[i]));
    } else if (lam < 0.0) {
      res = std::max(res, -lam * std::abs(ax[i] - cons.lower[i]));
    }
  }
  return res;
}

QpSolution solve_qp(const Eigen::MatrixXd& g, const Eigen::VectorXd& h,
                    const LinearConstraints& cons, const Eigen::VectorXd& x0,
                    const QpOptions& opts) {
  const Eigen::Index n = g.rows();
  const Eigen::Index m = cons.a.rows();
  if (g.cols() != n || h.size() != n || x0.size() != n ||
      (m > 0 && (cons.a.cols() != n || cons.lower.size() != m || cons.upper.size() != m))) {
    throw std::invalid_argument("solve_qp: dimension mismatch");
  }
  const double scale = 1.0 + x0.lpNorm<Eigen::Infinity>();
  if (max_violation(cons, x0) > opts.feasibility_tolerance * scale) {
    throw std::invalid_argument("solve_qp: starting point is infeasible");
  }

  const Eigen::LLT<Eigen::MatrixXd> hess(2.0 * g);
  if (hess.info() != Eigen::Success) {
    throw std::invalid_argument("solve_qp: G is not positive definite");
  }

  const int budget = opts.max_iterations > 0 ? opts.max_iterations
                                             : static_cast<int>(50 * (n + m) + 50);
  std::vector<ActiveRow> working;
  std::vector<char> in_working(static_cast<std::size_t>(m), 0);
  Eigen::VectorXd x = x0;
  Eigen::VectorXd lambda;
  Eigen::Index just_dropped = -1;

  QpSolution sol;
  for (int it = 0; it < budget; ++it) {
    const Eigen::VectorXd grad = 2.0 * g * x + h;
    const auto w = static_cast<Eigen::Index>(working.size());

    Eigen::VectorXd p;
    lambda.setZero(w);
    if (w == 0) {
      p = -hess.solve(grad);
    } else {
      Eigen::MatrixXd aw(w, n);
      for (Eigen::Index k = 0; k < w; ++k) aw.row(k) = cons.a.row(working[k].row);
      const Eigen::MatrixXd kinv_at = hess.solve(aw.transpose());
      const Eigen::MatrixXd schur = aw * kinv_at;
      lambda = schur.ldlt().solve(-aw * hess.solve(grad));
      p = -hess.solve(grad + aw.transpose() * lambda);
    }

    const double x_scale = 1.0 + x.lpNorm<Eigen::Infinity>();
    if (p.lpNorm<Eigen::Infinity>() <= opts.step_tolerance * x_scale) {
      // Stationary on the working set; drop the worst-signed multiplier.
      Eigen::Index worst = -1;
      double worst_val = -1e-12 * (1.0 + grad.lpNorm<Eigen::Infinity>());
      for (Eigen::Index k = 0; k < w; ++k) {
        const double signed_mult = working[k].side * lambda[k];
        if (signed_mult < worst_val) {
          worst_val = signed_mult;
          worst = k;
        }
      }
      if (worst < 0) {
        sol.x = x;
        sol.multipliers = Eigen::VectorXd::Zero(m);
        for (Eigen::Index k = 0; k < w; ++k) {
          // Clip round-off of the wrong sign.
          const double v = working[k].side * lambda[k];
          sol.multipliers[working[k].row] = working[k].side * std::max(v, 0.0);
        }
        sol.iterations = it;
        sol.kkt_residual = kkt_residual(g, h, cons, x, sol.multipliers);
        return sol;
      }
      in_working[static_cast<std::size_t>(working[worst].row)] = 0;
      just_dropped = working[worst].row;
      working.erase(working.begin() + worst);
      continue;
    }

    double alpha = 1.0;
    Eigen::Index block_row = -1;
    int block_side = 0;
    if (m > 0) {
      const Eigen::VectorXd ap = cons.a * p;
      const Eigen::VectorXd ax = cons.a * x;
      const double p_norm = p.norm();
      for (Eigen::Index i = 0; i < m; ++i) {
        // A row released on the previous pass cannot block straight away;
        // without this a round-off step re-adds it and the set cycles.
        if (in_working[static_cast<std::size_t>(i)] || i == just_dropped) continue;
        const double rate = ap[i];
        // Rows in the span of the working set see a zero rate up to
        // round-off; adding them would make the working set singular.
        if (std::abs(rate) <= 1e-12 * p_norm * cons.a.row(i).norm()) continue;
        if (rate > 0.0) {
          const double room = std::max(cons.upper[i] - ax[i], 0.0);
          if (room < alpha * rate) {
            alpha = room / rate;
            block_row = i;
            block_side = +1;
          }
        } else if (rate < 0.0) {
          const double room = std::max(ax[i] - cons.lower[i], 0.0);
          if (room < alpha * -rate) {
            alpha = room / -rate;
            block_row = i;
            block_side = -1;
          }
        }
      }
    }
    x += alpha * p;
    just_dropped = -1;
    if (block_row >= 0) {
      working.push_back({block_row, block_side});
      in_working[static_cast<std::size_t>(block_row)] = 1;
    }
  }
  throw SolverError("solve_qp: active-set iteration budget exhausted");
}

}  // namespace lawn
