#include "support.hpp"

#include "lawn/agv_dynamics.hpp"
#include "lawn/power_allocation.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace lawn;
using lawn::testing::Gen;

namespace {

PowerForm random_form(Gen& gen) {
  // Any form produced by the cost assembly has l >= 0 and w >= s^2 / l.
  PowerForm f;
  f.l = gen.uniform(0.0, 50.0);
  f.s = gen.uniform(-30.0, 10.0);
  f.w = gen.uniform(0.0, 100.0) + (f.l > 0.0 ? f.s * f.s / f.l : 0.0);
  return f;
}

PowerProblem random_problem(Gen& gen, int k, double p_max) {
  PowerProblem pr;
  pr.p_max = p_max;
  for (int i = 0; i < k; ++i) {
    const double c = gen.uniform(0.0, 1.0) < 0.2 ? -gen.uniform(0.0, 1.0) : gen.uniform(0.01, 2.0);
    pr.terms.push_back({random_form(gen), c});
  }
  return pr;
}

Eigen::VectorXd random_feasible(Gen& gen, int k, double p_max) {
  Eigen::VectorXd p = gen.vector(k, 0.0, 1.0);
  return p * (gen.uniform(0.05, 1.0) * p_max / p.sum());
}

}  // namespace

TEST_CASE("power cost") {
  PowerProblem sat;
  sat.terms = {{{1, 2, 3}, -1.0}, {{0.5, -1, 4}, 0.0}};
  for (const Eigen::Vector2d& p : {Eigen::Vector2d(0, 0), Eigen::Vector2d(0.3, 0.7)}) {
    CHECK(power_cost(sat, p) == doctest::Approx(1 + 4 + 3 + 0.5 - 2 + 4));
  }
  PowerProblem one;
  one.terms = {{{1, 0, 0}, std::numbers::ln2}};
  CHECK(power_cost(one, Eigen::VectorXd::Ones(1)) == doctest::Approx(0.25));
  CHECK_THROWS_AS(power_cost(one, Eigen::VectorXd::Constant(1, -1.0)), std::domain_error);
  CHECK_THROWS_AS(power_cost(one, Eigen::VectorXd::Zero(2)), std::invalid_argument);
}

TEST_CASE("power gradient") {
  PowerProblem flat;
  flat.terms = {{{3, 1, 1}, -0.5}, {{0, 0, 7}, 0.8}};
  const Eigen::VectorXd grad = power_gradient(flat, Eigen::Vector2d(0.2, 0.4));
  CHECK(grad[0] == 0.0);
  CHECK(grad[1] == 0.0);

  Gen gen(41);
  for (int i = 0; i < 100; ++i) {
    PowerProblem pr = random_problem(gen, gen.integer(1, 6), 1.0);
    for (auto& t : pr.terms) t.link_factor = gen.uniform(0.01, 2.0);
    const auto k = static_cast<Eigen::Index>(pr.terms.size());
    Eigen::VectorXd p(k);
    for (Eigen::Index j = 0; j < k; ++j) p[j] = pr.terms[static_cast<std::size_t>(j)].link_factor / gen.log_uniform(0.05, 10.0);
    const Eigen::VectorXd g = power_gradient(pr, p);
    for (Eigen::Index j = 0; j < k; ++j) {
      const double c = pr.terms[static_cast<std::size_t>(j)].link_factor;
      const double h = 1e-3 * p[j] * std::min(1.0, p[j] / c);
      const double fd = lawn::testing::five_point_difference(
          [&](double x) {
            Eigen::VectorXd q = p;
            q[j] = x;
            return power_cost(pr, q);
          },
          p[j], h);
      CHECK(std::abs(g[j] - fd) <= 1e-6 * std::max(std::abs(g[j]), 1e-12));
    }
  }
}

TEST_CASE("capped simplex projection") {
  CHECK((project_capped_simplex(Eigen::Vector2d(2, 2), 1.0) - Eigen::Vector2d(0.5, 0.5)).norm() < 1e-15);
  CHECK((project_capped_simplex(Eigen::Vector2d(0.8, 0.6), 1.0) - Eigen::Vector2d(0.6, 0.4)).norm() < 1e-15);
  CHECK((project_capped_simplex(Eigen::Vector2d(-1, 0.5), 1.0) - Eigen::Vector2d(0, 0.5)).norm() == 0.0);
  CHECK_THROWS_AS(project_capped_simplex(Eigen::Vector2d(1, 1), 0.0), std::invalid_argument);

  Gen gen(42);
  for (int i = 0; i < 200; ++i) {
    const int k = gen.integer(1, 8);
    const double cap = gen.uniform(0.1, 5.0);
    const Eigen::VectorXd v = gen.vector(k, -2.0, 3.0);
    const Eigen::VectorXd p = project_capped_simplex(v, cap);
    CHECK(p.minCoeff() >= 0.0);
    CHECK(p.sum() <= cap * (1.0 + 1e-12));
    CHECK((project_capped_simplex(p, cap) - p).norm() <= 1e-12);
    // Variational inequality: (v - p)'(y - p) <= 0 for every feasible y.
    for (int t = 0; t < 20; ++t) {
      const Eigen::VectorXd y = random_feasible(gen, k, cap);
      CHECK((v - p).dot(y - p) <= 1e-12);
    }
  }
}

TEST_CASE("projected gradient descent") {
  PowerProblem flat;
  flat.terms = {{{1, 1, 1}, -1.0}, {{2, -1, 3}, -0.1}};
  const Eigen::Vector2d p0(0.3, 0.2);
  const PgdResult r0 = pgd_allocate(flat, {}, p0);
  CHECK(r0.iterations == 1);
  CHECK(r0.power == p0);

  PowerProblem single;
  single.terms = {{{0, -1, 0}, 1.0}};
  const PgdResult r1 = pgd_allocate(single, {}, Eigen::VectorXd::Constant(1, 0.1));
  CHECK(std::abs(r1.power[0] - 1.0) < 1e-6);
  // Line scan agrees that the budget is the best level.
  for (double x = 0.01; x <= 1.0; x += 0.01) {
    CHECK(power_cost(single, r1.power) <= power_cost(single, Eigen::VectorXd::Constant(1, x)) + 1e-12);
  }

  CHECK_THROWS_AS(pgd_allocate(single, {}, Eigen::VectorXd::Constant(1, 1.5)), std::invalid_argument);
  PgdSettings bad;
  bad.armijo = 2.0;
  CHECK_THROWS_WITH_AS(pgd_allocate(single, bad, Eigen::VectorXd::Constant(1, 0.5)),
                       doctest::Contains("pgd.armijo"), std::invalid_argument);
}

TEST_CASE("descent on random instances") {
  Gen gen(43);
  for (bool literal : {false, true}) {
    PgdSettings st;
    st.literal_alg1 = literal;
    for (int i = 0; i < 50; ++i) {
      const int k = gen.integer(1, 6);
      const PowerProblem pr = random_problem(gen, k, gen.uniform(0.2, 4.0));
      const PgdResult r = pgd_allocate(pr, st, random_feasible(gen, k, pr.p_max));
      for (std::size_t t = 1; t < r.cost_trace.size(); ++t) {
        CHECK(r.cost_trace[t] <= r.cost_trace[t - 1]);
      }
      CHECK(r.power.minCoeff() >= 0.0);
      CHECK(r.power.sum() <= pr.p_max * (1.0 + 1e-12));
      CHECK(r.cost_trace.back() == doctest::Approx(power_cost(pr, r.power)));
    }
  }
}

TEST_CASE("equal power") {
  CHECK(equal_power(4, 1.0) == Eigen::Vector4d::Constant(0.25));
}

TEST_CASE("power cost agrees with the assembled control cost") {
  Gen gen(44);
  const SystemMatrices sys = build_system(0.5);
  const Mat6 q3 = riccati_terminal(sys, Mat6::Identity(), Eigen::Matrix2d::Identity());
  const PredictionModel model = build_prediction(sys, Mat6::Identity(), Eigen::Matrix2d::Identity(), q3, 3);
  for (int i = 0; i < 50; ++i) {
    AugmentedAgvState x;
    x.state.position = gen.point(-5, 5);
    x.state.velocity = gen.point(-1, 1);
    ReferenceWindow w;
    for (int j = 0; j <= 3; ++j) {
      AugmentedAgvState r;
      r.state.position = gen.point(-5, 5);
      w.refs.push_back(r);
    }
    const Eigen::VectorXd mu = gen.vector(6, -1, 1);
    const double c = gen.uniform(0.05, 2.0);
    const double p = gen.uniform(0.05, 2.0);
    const double g = std::exp(-c / p);
    const QpCoefficients qc = assemble_cost(x, w, model, g);
    PowerProblem pr;
    pr.p_max = 5.0;
    pr.terms = {{qc.power_form(mu), c}};
    const double expect = qc.objective(mu);
    CHECK(std::abs(power_cost(pr, Eigen::VectorXd::Constant(1, p)) - expect) <= 1e-9 * std::abs(expect));
  }
}
