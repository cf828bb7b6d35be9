#include "lawn/ao_orchestrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace lawn {

void AoSettings::validate() const {
  if (!(tolerance > 0.0)) throw std::invalid_argument("ao.tolerance: must be positive");
  if (max_iterations < 1) throw std::invalid_argument("ao.max_iterations: must be >= 1");
}

namespace {

double factor_at(const SlotContext& ctx, const Eigen::Vector2d& q, const Eigen::Vector2d& agv) {
  if (ctx.ideal_channel) return -std::numeric_limits<double>::infinity();
  return link_factor(LinkGeometry{q, agv, ctx.altitude}, ctx.channel, ctx.snr_threshold);
}

// Largest t <= cap with p + t dp and q + t dq still feasible.
double feasible_reach(const Eigen::VectorXd& p, const Eigen::VectorXd& dp, const Eigen::Vector2d& q,
                      const Eigen::Vector2d& dq, const Eigen::Vector2d& prev_q,
                      const SlotContext& ctx, double cap) {
  double t = cap;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (dp[i] < 0.0) t = std::min(t, p[i] / -dp[i]);
  }
  if (dp.sum() > 0.0) t = std::min(t, (ctx.p_max - p.sum()) / dp.sum());
  const FlightRegion& box = ctx.region;
  for (int i = 0; i < 2; ++i) {
    const double lo = i == 0 ? box.x_min : box.y_min;
    const double hi = i == 0 ? box.x_max : box.y_max;
    if (dq[i] > 0.0) t = std::min(t, (hi - q[i]) / dq[i]);
    if (dq[i] < 0.0) t = std::min(t, (lo - q[i]) / dq[i]);
  }
  const double a = dq.squaredNorm();
  if (a > 0.0) {
    const Eigen::Vector2d e = q - prev_q;
    const double b = e.dot(dq);
    const double c = e.squaredNorm() - ctx.mobility.radius() * ctx.mobility.radius();
    t = std::min(t, (-b + std::sqrt(std::max(b * b - a * c, 0.0))) / a);
  }
  return std::max(t, 0.0);
}

}  // namespace

ReferenceWindow reference_window(const std::vector<AugmentedAgvState>& samples, int slot,
                                 int horizon) {
  if (samples.empty()) throw std::invalid_argument("reference_window: no reference samples");
  ReferenceWindow w;
  w.refs.reserve(static_cast<std::size_t>(horizon + 1));
  const int last = static_cast<int>(samples.size()) - 1;
  for (int i = 0; i <= horizon; ++i) {
    w.refs.push_back(samples[static_cast<std::size_t>(std::min(slot + i, last))]);
  }
  return w;
}

namespace {

SlotDecision alternate(const std::vector<AugmentedAgvState>& states,
                       const std::vector<QpCoefficients>& base, const SlotContext& ctx,
                       const Eigen::Vector2d& prev_q, const Eigen::VectorXd& seed_p,
                       const Eigen::Vector2d& seed_q) {
  const std::size_t k_count = states.size();
  SlotDecision d;
  d.delta_mu.assign(k_count, Eigen::VectorXd::Zero(2 * ctx.model.horizon));
  d.power = seed_p;
  d.waypoint = seed_q;

  auto survivals = [&](const Eigen::VectorXd& p, const Eigen::Vector2d& q) {
    std::vector<double> g(k_count);
    for (std::size_t k = 0; k < k_count; ++k) {
      g[k] = survival_from_factor(factor_at(ctx, q, states[k].state.position),
                                  p[static_cast<Eigen::Index>(k)]);
    }
    return g;
  };
  auto objective = [&](const std::vector<double>& g) {
    double total = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) {
      total += base[k].power_form(d.delta_mu[k]).at(g[k]);
    }
    return total;
  };

  std::vector<double> g = survivals(d.power, d.waypoint);
  double prev_obj = objective(g);
  d.objective_trace.push_back(prev_obj);

  for (int it = 1; it <= ctx.ao.max_iterations; ++it) {
    d.iterations = it;
    const Eigen::VectorXd round_p = d.power;
    const Eigen::Vector2d round_q = d.waypoint;

    // Control increments at the current link reliabilities.
    for (std::size_t k = 0; k < k_count; ++k) {
      const ControlQpResult qp = solve_control_qp(base[k].with_survival(g[k]), ctx.control,
                                                  states[k].prev_accel, &d.delta_mu[k]);
      d.delta_mu[k] = qp.delta_mu;
      d.max_kkt_residual = std::max(d.max_kkt_residual, qp.kkt_residual);
    }

    std::vector<PowerForm> forms(k_count);
    for (std::size_t k = 0; k < k_count; ++k) forms[k] = base[k].power_form(d.delta_mu[k]);

    if (ctx.allocator == AllocatorMode::proposed) {
      PowerProblem problem;
      problem.p_max = ctx.p_max;
      for (std::size_t k = 0; k < k_count; ++k) {
        problem.terms.push_back({forms[k], factor_at(ctx, d.waypoint, states[k].state.position)});
      }
      // Survival has zero slope at p = 0, so a starved link cannot recover
      // from the warm start alone. The equal-split start is kept only when
      // it ends lower.
      Eigen::VectorXd best = pgd_allocate(problem, ctx.pgd, d.power).power;
      const Eigen::VectorXd alt =
          pgd_allocate(problem, ctx.pgd, equal_power(static_cast<int>(k_count), ctx.p_max)).power;
      if (power_cost(problem, alt) < power_cost(problem, best)) best = alt;
      d.power = best;
    }

    if (ctx.trajectory == TrajectoryMode::proposed) {
      PlanningScene scene;
      scene.params = ctx.channel;
      scene.altitude = ctx.altitude;
      scene.snr_threshold = ctx.snr_threshold;
      scene.ideal_channel = ctx.ideal_channel;
      for (std::size_t k = 0; k < k_count; ++k) {
        scene.links.push_back({forms[k], states[k].state.position,
                               d.power[static_cast<Eigen::Index>(k)]});
      }
      d.waypoint = sca_plan(scene, d.waypoint, ctx.region, ctx.mobility, ctx.sca, &prev_q).waypoint;
    }

    g = survivals(d.power, d.waypoint);
    double obj = objective(g);

    // The blocks only see each other through the survivals, so a round
    // moves power and position a little way along a path that keeps going
    // the same way. Extrapolate along this round's move with the increments
    // re-solved, and keep the best point only if it lowers the objective.
    const Eigen::VectorXd dp = d.power - round_p;
    const Eigen::Vector2d dq = d.waypoint - round_q;
    if (dp.squaredNorm() + dq.squaredNorm() > 0.0) {
      const Eigen::VectorXd from_p = d.power;
      const Eigen::Vector2d from_q = d.waypoint;
      const double reach = feasible_reach(from_p, dp, from_q, dq, prev_q, ctx, 64.0);
      double last_t = 0.0;
      for (double t : {64.0, 16.0, 4.0, 1.0}) {
        t = std::min(t, reach);
        if (t <= 0.0 || t == last_t) continue;
        last_t = t;
        Eigen::VectorXd p_try = (from_p + t * dp).cwiseMax(0.0);
        if (p_try.sum() > ctx.p_max) p_try *= ctx.p_max / p_try.sum();
        Eigen::Vector2d q_try = from_q + t * dq;
        q_try.x() = std::clamp(q_try.x(), ctx.region.x_min, ctx.region.x_max);
        q_try.y() = std::clamp(q_try.y(), ctx.region.y_min, ctx.region.y_max);
        const std::vector<double> g_try = survivals(p_try, q_try);
        std::vector<Eigen::VectorXd> mu_try(k_count);
        double obj_try = 0.0;
        for (std::size_t k = 0; k < k_count; ++k) {
          mu_try[k] = solve_control_qp(base[k].with_survival(g_try[k]), ctx.control,
                                       states[k].prev_accel, &d.delta_mu[k])
                          .delta_mu;
          obj_try += base[k].power_form(mu_try[k]).at(g_try[k]);
        }
        if (obj_try < obj) {
          obj = obj_try;
          g = g_try;
          d.power = p_try;
          d.waypoint = q_try;
          d.delta_mu = std::move(mu_try);
        }
      }
    }
    d.objective_trace.push_back(obj);
    const double change = std::abs(prev_obj - obj) / std::max(std::abs(prev_obj), 1e-12);
    prev_obj = obj;
    if (change < ctx.ao.tolerance) {
      d.converged = true;
      break;
    }
  }

  d.objective = prev_obj;
  d.survival = g;
  for (std::size_t k = 0; k < k_count; ++k) {
    d.agv_objective.push_back(base[k].power_form(d.delta_mu[k]).at(g[k]));
  }
  d.first_increment.reserve(k_count);
  for (const auto& mu : d.delta_mu) d.first_increment.push_back(first_increment(mu));
  return d;
}

}  // namespace

SlotDecision solve_slot(const std::vector<AugmentedAgvState>& states,
                        const std::vector<ReferenceWindow>& refs, const SlotContext& ctx,
                        const Eigen::Vector2d& prev_q, const Eigen::VectorXd& prev_p,
                        int slot_index) {
  const std::size_t k_count = states.size();
  if (refs.size() != k_count || static_cast<std::size_t>(prev_p.size()) != k_count) {
    throw SlotError(slot_index, "state, reference and power counts differ");
  }

  try {
    std::vector<QpCoefficients> base;
    base.reserve(k_count);
    for (std::size_t k = 0; k < k_count; ++k) {
      base.push_back(assemble_cost(states[k], refs[k], ctx.model, 1.0));
    }

    SlotDecision d = alternate(states, base, ctx, prev_q, prev_p, prev_q);
    if (ctx.allocator != AllocatorMode::proposed) return d;

    // With all increments at zero the starting objective does not depend on
    // the seed, so extra seeds are free restarts; the lowest final objective
    // wins. Control and power or position only interact through their
    // product, so the alternation creeps upward in survival one round at a
    // time. The extra seeds start it near the top instead: all unused power
    // on the links that are not saturated, with the drone where those links
    // are most reliable. The equal split revives starved links.
    std::vector<Eigen::Index> weak;
    for (std::size_t k = 0; k < k_count; ++k) {
      if (factor_at(ctx, prev_q, states[k].state.position) > 0.0) {
        weak.push_back(static_cast<Eigen::Index>(k));
      }
    }
    std::vector<std::pair<Eigen::VectorXd, Eigen::Vector2d>> seeds;
    if (!weak.empty()) {
      Eigen::VectorXd filled = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k_count));
      double spare = ctx.p_max;
      for (Eigen::Index k : weak) spare -= prev_p[k];
      for (Eigen::Index k : weak) {
        filled[k] = prev_p[k] + std::max(spare, 0.0) / static_cast<double>(weak.size());
      }
      seeds.emplace_back(filled, prev_q);
      if (ctx.trajectory == TrajectoryMode::proposed) {
        PlanningScene reach;
        reach.params = ctx.channel;
        reach.altitude = ctx.altitude;
        reach.snr_threshold = ctx.snr_threshold;
        for (Eigen::Index k : weak) {
          reach.links.push_back({PowerForm{0.0, -1.0, 0.0},
                                 states[static_cast<std::size_t>(k)].state.position, filled[k]});
        }
        seeds.emplace_back(filled, sca_plan(reach, prev_q, ctx.region, ctx.mobility, ctx.sca).waypoint);
      }
    }
    seeds.emplace_back(equal_power(static_cast<int>(k_count), ctx.p_max), prev_q);

    for (const auto& [p_seed, q_seed] : seeds) {
      if (p_seed == prev_p && q_seed == prev_q) continue;
      SlotDecision alt = alternate(states, base, ctx, prev_q, p_seed, q_seed);
      if (alt.objective < d.objective) d = std::move(alt);
    }
    return d;
  } catch (const SlotError&) {
    throw;
  } catch (const std::exception& e) {
    throw SlotError(slot_index, e.what());
  }
}

EpisodeLog run_episode(const EpisodeSetup& setup) {
  const SlotContext& ctx = setup.ctx;
  const std::size_t k_count = setup.initial.size();
  if (setup.references.size() != k_count) {
    throw std::invalid_argument("run_episode: one reference track per AGV required");
  }
  const bool straight = ctx.trajectory == TrajectoryMode::straight_flight;
  if (straight && static_cast<int>(setup.fixed_waypoints.size()) < setup.slots) {
    throw std::invalid_argument("run_episode: straight flight needs one waypoint per slot");
  }

  EpisodeLog log;
  log.slots.reserve(static_cast<std::size_t>(std::max(setup.slots, 0)));
  std::mt19937_64 rng(setup.seed);
  std::vector<AugmentedAgvState> states = setup.initial;
  Eigen::Vector2d q = setup.drone_start;
  Eigen::VectorXd p = equal_power(static_cast<int>(k_count), ctx.p_max);

  for (int n = 0; n < setup.slots; ++n) {
    std::vector<ReferenceWindow> windows;
    windows.reserve(k_count);
    for (std::size_t k = 0; k < k_count; ++k) {
      windows.push_back(reference_window(setup.references[k], n, ctx.model.horizon));
    }
    if (straight) q = setup.fixed_waypoints[static_cast<std::size_t>(n)];
    if (ctx.allocator == AllocatorMode::epa) p = equal_power(static_cast<int>(k_count), ctx.p_max);

    SlotRecord rec;
    rec.slot = n;
    rec.states = states;
    rec.decision = solve_slot(states, windows, ctx, q, p, n);
    rec.cost = rec.decision.objective;

    for (std::size_t k = 0; k < k_count; ++k) {
      const double survival = rec.decision.survival[k];
      const bool delivered = draw_delivered(survival, rng);
      const Eigen::Vector2d ref_xy = windows[k].refs.front().state.position;
      rec.reference_xy.push_back(ref_xy);
      rec.tracking_error.push_back((states[k].state.position - ref_xy).norm());
      rec.outage.push_back(1.0 - survival);
      rec.delivered.push_back(delivered);
      states[k] = step(states[k], rec.decision.first_increment[k], delivered, ctx.sys);
    }
    q = rec.decision.waypoint;
    p = rec.decision.power;
    log.slots.push_back(std::move(rec));
  }
  log.final_states = states;
  return log;
}

}  // namespace lawn
