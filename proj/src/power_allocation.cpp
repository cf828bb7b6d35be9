#include "lawn/power_allocation.hpp"

#include "lawn/fbl_channel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace lawn {

void PgdSettings::validate() const {
  if (!(initial_step > 0.0)) throw std::invalid_argument("pgd.initial_step: must be positive");
  if (!(armijo > 0.0 && armijo < 1.0)) throw std::invalid_argument("pgd.armijo: must lie in (0, 1)");
  if (!(backtrack > 0.0)) throw std::invalid_argument("pgd.backtrack: must be positive");
  if (!(tolerance > 0.0)) throw std::invalid_argument("pgd.tolerance: must be positive");
  if (max_iterations < 1) throw std::invalid_argument("pgd.max_iterations: must be >= 1");
}

namespace {

void check_power(const PowerProblem& problem, const Eigen::VectorXd& p) {
  if (p.size() != static_cast<Eigen::Index>(problem.terms.size())) {
    throw std::invalid_argument("power vector length does not match the number of links");
  }
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (!(p[k] >= 0.0) || !std::isfinite(p[k])) {
      throw std::domain_error("power components must be finite and nonnegative");
    }
  }
}

}  // namespace

double power_cost(const PowerProblem& problem, const Eigen::VectorXd& p) {
  check_power(problem, p);
  double total = 0.0;
  for (std::size_t k = 0; k < problem.terms.size(); ++k) {
    const auto& t = problem.terms[k];
    total += t.form.at(survival_from_factor(t.link_factor, p[static_cast<Eigen::Index>(k)]));
  }
  return total;
}

Eigen::VectorXd power_gradient(const PowerProblem& problem, const Eigen::VectorXd& p) {
  check_power(problem, p);
  Eigen::VectorXd grad(p.size());
  for (std::size_t k = 0; k < problem.terms.size(); ++k) {
    const auto& t = problem.terms[k];
    const double pk = p[static_cast<Eigen::Index>(k)];
    const double g = survival_from_factor(t.link_factor, pk);
    grad[static_cast<Eigen::Index>(k)] = t.form.slope(g) * survival_power_slope(t.link_factor, pk);
  }
  return grad;
}

Eigen::VectorXd project_capped_simplex(const Eigen::VectorXd& v, double p_max) {
  if (!(p_max > 0.0)) throw std::invalid_argument("project_capped_simplex: p_max must be positive");
  Eigen::VectorXd clipped = v.cwiseMax(0.0);
  if (clipped.sum() <= p_max) return clipped;

  // Budget binds: subtract the uniform multiplier tau that makes the
  // clipped vector sum to p_max.
  std::vector<double> sorted(v.data(), v.data() + v.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double tau = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    cumulative += sorted[j];
    const double candidate = (cumulative - p_max) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) tau = candidate;
  }
  return (v.array() - tau).cwiseMax(0.0).matrix();
}

Eigen::VectorXd equal_power(int count, double p_max) {
  return Eigen::VectorXd::Constant(count, p_max / static_cast<double>(count));
}

PgdResult pgd_allocate(const PowerProblem& problem, const PgdSettings& settings,
                       const Eigen::VectorXd& p0) {
  settings.validate();
  check_power(problem, p0);
  if (p0.sum() > problem.p_max * (1.0 + 1e-12)) {
    throw std::invalid_argument("pgd_allocate: starting point exceeds the power budget");
  }

  PgdResult res;
  Eigen::VectorXd p = p0;
  double cost = power_cost(problem, p);
  res.cost_trace.push_back(cost);
  double rho = settings.initial_step;
  const double shrink = 1.0 / (1.0 + settings.backtrack);

  for (int it = 0; it < settings.max_iterations; ++it) {
    res.iterations = it + 1;
    const Eigen::VectorXd dir = power_gradient(problem, p);
    const double dir_sq = dir.squaredNorm();
    if (!settings.literal_alg1) rho = settings.initial_step;

    Eigen::VectorXd trial;
    double trial_cost = cost;
    bool accepted = false;
    while (true) {
      rho *= shrink;
      if (rho < 1e-15) break;
      trial = project_capped_simplex(p - rho * dir, problem.p_max);
      trial_cost = power_cost(problem, trial);
      if (trial_cost <= cost - settings.armijo * rho * dir_sq) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      res.step_underflow = true;
      break;
    }

    const double move = (trial - p).norm();
    p = trial;
    cost = trial_cost;
    res.cost_trace.push_back(cost);
    if (move < settings.tolerance) break;
  }
  res.power = p;
  return res;
}

}  // namespace lawn
