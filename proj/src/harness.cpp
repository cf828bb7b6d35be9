#include "lawn/harness.hpp"

#include "lawn/reference_path.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace lawn {

std::vector<Eigen::Vector2d> straight_flight_waypoints(const ScenarioConfig& cfg) {
  const double h = cfg.straight_flight.heading_deg * std::numbers::pi / 180.0;
  const Eigen::Vector2d dir(std::cos(h), std::sin(h));
  std::vector<Eigen::Vector2d> out;
  out.reserve(static_cast<std::size_t>(cfg.slots));
  for (int n = 0; n < cfg.slots; ++n) {
    const Eigen::Vector2d q = cfg.drone_start + (n * cfg.slot_duration_s * cfg.straight_flight.speed) * dir;
    out.emplace_back(std::clamp(q.x(), cfg.region.x_min, cfg.region.x_max),
                     std::clamp(q.y(), cfg.region.y_min, cfg.region.y_max));
  }
  return out;
}

EpisodeSetup make_setup(const ScenarioConfig& cfg) {
  cfg.validate();
  EpisodeSetup s;
  SlotContext& ctx = s.ctx;
  ctx.sys = build_system(cfg.slot_duration_s);
  const Mat6 q1 = cfg.q1_diag.asDiagonal();
  const Eigen::Matrix2d q2 = cfg.q2_diag.asDiagonal();
  const Mat6 q3 = riccati_terminal(ctx.sys, q1, q2);
  ctx.model = build_prediction(ctx.sys, q1, q2, q3, cfg.horizon);
  ctx.control = cfg.control;
  ctx.channel = cfg.channel;
  ctx.channel.infinite_blocklength = cfg.channel_mode == ChannelMode::ibl;
  ctx.ideal_channel = cfg.channel_mode == ChannelMode::ideal;
  ctx.snr_threshold = ctx.ideal_channel ? 0.0 : required_snr(ctx.channel);
  ctx.altitude = cfg.altitude;
  ctx.region = cfg.region;
  ctx.mobility = MobilityLimit{cfg.drone_vmax, cfg.slot_duration_s};
  ctx.p_max = cfg.power_budget;
  ctx.pgd = cfg.pgd;
  ctx.sca = cfg.sca;
  ctx.ao = cfg.ao;
  ctx.allocator = cfg.allocator;
  ctx.trajectory = cfg.trajectory_mode;

  const int samples = cfg.slots + cfg.horizon + 1;
  for (const auto& path : cfg.agv_paths) {
    s.references.push_back(reference_path(path, samples, cfg.slot_duration_s));
    s.initial.push_back(s.references.back().front());
  }
  s.slots = cfg.slots;
  s.drone_start = cfg.drone_start;
  s.seed = cfg.seed;
  if (cfg.trajectory_mode == TrajectoryMode::straight_flight) {
    s.fixed_waypoints = straight_flight_waypoints(cfg);
  }
  return s;
}

RunResult run(const ScenarioConfig& cfg) {
  RunResult r;
  r.log = run_episode(make_setup(cfg));
  r.metrics = compute_metrics(r.log, cfg.agv_count());
  return r;
}

SweepAxis parse_sweep_axis(const std::string& s) {
  if (s == "power_budget") return SweepAxis::power_budget;
  if (s == "rate_threshold") return SweepAxis::rate_threshold;
  if (s == "blocklength") return SweepAxis::blocklength;
  throw std::invalid_argument("unknown sweep axis '" + s +
                              "' (power_budget, rate_threshold, blocklength)");
}

std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::power_budget: return "power_budget";
    case SweepAxis::rate_threshold: return "rate_threshold";
    case SweepAxis::blocklength: return "blocklength";
  }
  return {};
}

ScenarioConfig with_axis(const ScenarioConfig& cfg, SweepAxis axis, double value) {
  ScenarioConfig c = cfg;
  switch (axis) {
    case SweepAxis::power_budget: c.power_budget = value; break;
    case SweepAxis::rate_threshold: c.channel.rate_threshold = value; break;
    case SweepAxis::blocklength: c.channel.blocklength = value; break;
  }
  return c;
}

std::vector<SweepRow> sweep(const ScenarioConfig& cfg, SweepAxis axis,
                            const std::vector<double>& values, int jobs, int replications) {
  if (values.empty()) throw std::invalid_argument("sweep: no values given");
  if (!std::is_sorted(values.begin(), values.end())) {
    throw std::invalid_argument("sweep: values must be sorted ascending");
  }
  if (replications < 1) throw std::invalid_argument("sweep: replications must be >= 1");
  const auto reps = static_cast<std::size_t>(replications);
  const std::size_t total = values.size() * reps;

  std::vector<MetricsReport> episodes(total);
  std::vector<std::string> errors(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      const std::size_t row = i / reps;
      ScenarioConfig c = with_axis(cfg, axis, values[row]);
      c.seed = cfg.seed + (i % reps);
      try {
        episodes[i] = run(c).metrics;
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int threads = std::clamp<int>(jobs, 1, static_cast<int>(total));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  std::vector<SweepRow> rows(values.size());
  for (std::size_t r = 0; r < values.size(); ++r) {
    rows[r].value = values[r];
    for (std::size_t j = 0; j < reps && rows[r].error.empty(); ++j) rows[r].error = errors[r * reps + j];
    if (!rows[r].error.empty()) continue;
    rows[r].metrics = pool_metrics({episodes.begin() + static_cast<std::ptrdiff_t>(r * reps),
                                    episodes.begin() + static_cast<std::ptrdiff_t>((r + 1) * reps)});
    rows[r].ok = true;
  }
  return rows;
}

}  // namespace lawn
