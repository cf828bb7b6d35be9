// lawnctl: run, sweep and inspect drone-relayed AGV control scenarios.

#include "lawn/harness.hpp"
#include "lawn/io.hpp"
#include "lawn/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  std::string allocator;
  std::string trajectory_mode;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "Scenario file (defaults when omitted)");
  cmd->add_option("--seed", c.seed, "Override the scenario seed");
  cmd->add_option("--out-dir", c.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--allocator", c.allocator, "proposed | epa");
  cmd->add_option("--trajectory-mode", c.trajectory_mode, "proposed | straight_flight");
}

lawn::ScenarioConfig resolve(const Common& c) {
  lawn::ScenarioConfig cfg = c.config.empty() ? lawn::default_config() : lawn::load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (!c.allocator.empty()) cfg.allocator = lawn::parse_allocator(c.allocator);
  if (!c.trajectory_mode.empty()) cfg.trajectory_mode = lawn::parse_trajectory_mode(c.trajectory_mode);
  cfg.validate();
  return cfg;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint control, power and drone trajectory co-design simulator"};
  app.require_subcommand(1);

  Common run_opts, sweep_opts, conv_opts;
  auto* run_cmd = app.add_subcommand("run", "Run one episode; writes log.csv, trajectory.csv and summary.json");
  add_common(run_cmd, run_opts);

  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep one parameter; writes sweep_<axis>.csv");
  add_common(sweep_cmd, sweep_opts);
  std::string axis;
  std::vector<double> values;
  int jobs = 1;
  int replications = 1;
  sweep_cmd->add_option("--axis", axis, "power_budget | rate_threshold | blocklength")->required();
  sweep_cmd->add_option("--values", values, "Ascending parameter values")->required()->delimiter(',');
  sweep_cmd->add_option("--jobs", jobs, "Parallel episodes")->capture_default_str();
  sweep_cmd->add_option("--replications", replications, "Episodes pooled per value (consecutive seeds)")
      ->capture_default_str();

  auto* conv_cmd = app.add_subcommand("convergence", "Dump per-slot AO objective traces");
  add_common(conv_cmd, conv_opts);

  auto* cfg_cmd = app.add_subcommand("config", "Print the resolved scenario file");
  Common cfg_opts;
  add_common(cfg_cmd, cfg_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run_cmd) {
      const auto cfg = resolve(run_opts);
      const auto t0 = std::chrono::steady_clock::now();
      const auto result = lawn::run(cfg);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      fs::create_directories(run_opts.out_dir);
      auto log = open_out(fs::path(run_opts.out_dir) / "log.csv");
      lawn::write_log_csv(log, result.log);
      auto summary = open_out(fs::path(run_opts.out_dir) / "summary.json");
      lawn::write_summary_json(summary, result.metrics, cfg.seed);
      auto traj = open_out(fs::path(run_opts.out_dir) / "trajectory.csv");
      lawn::write_trajectory_csv(traj, result.log);
      std::cout << "total_cost " << lawn::format_double(result.metrics.total_cost) << "\n";
      for (std::size_t k = 0; k < result.metrics.rmse.size(); ++k) {
        std::cout << "agv " << k << " rmse_m " << result.metrics.rmse[k] << " outage_rate "
                  << result.metrics.outage_rate[k] << "\n";
      }
      std::cout << "elapsed_s " << secs << "\n";
    } else if (*sweep_cmd) {
      const auto cfg = resolve(sweep_opts);
      const auto ax = lawn::parse_sweep_axis(axis);
      const auto rows = lawn::sweep(cfg, ax, values, jobs, replications);
      fs::create_directories(sweep_opts.out_dir);
      auto out = open_out(fs::path(sweep_opts.out_dir) / ("sweep_" + axis + ".csv"));
      lawn::write_sweep_csv(out, ax, rows);
      lawn::write_sweep_csv(std::cout, ax, rows);
      for (const auto& r : rows) {
        if (!r.ok) return 2;
      }
    } else if (*conv_cmd) {
      const auto cfg = resolve(conv_opts);
      const auto result = lawn::run(cfg);
      fs::create_directories(conv_opts.out_dir);
      auto out = open_out(fs::path(conv_opts.out_dir) / "convergence.csv");
      lawn::write_convergence_csv(out, result.log);
      std::size_t converged = 0, iters = 0;
      for (const auto& rec : result.log.slots) {
        converged += rec.decision.converged ? 1 : 0;
        iters += static_cast<std::size_t>(rec.decision.iterations);
      }
      std::cout << "slots " << result.log.slots.size() << " converged " << converged
                << " mean_iterations "
                << (result.log.slots.empty() ? 0.0 : double(iters) / double(result.log.slots.size()))
                << "\n";
    } else if (*cfg_cmd) {
      std::cout << lawn::serialize_config(resolve(cfg_opts));
    }
  } catch (const std::exception& e) {
    nlohmann::json err{{"error", e.what()}, {"command", app.get_subcommands().front()->get_name()}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 0;
}
