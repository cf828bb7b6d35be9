#include "lawn/fbl_channel.hpp"
#include "lawn/harness.hpp"
#include "lawn/power_allocation.hpp"
#include "lawn/scenario.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace lawn;

namespace {

ScenarioConfig config_from(const std::optional<std::string>& text, std::optional<std::uint64_t> seed) {
  ScenarioConfig cfg = text ? parse_config(*text) : default_config();
  if (seed) cfg.seed = *seed;
  cfg.validate();
  return cfg;
}

py::dict metrics_dict(const MetricsReport& m) {
  py::dict d;
  d["total_cost"] = m.total_cost;
  d["rmse"] = m.rmse;
  d["cdf_samples"] = m.cdf_samples;
  d["slot_costs"] = m.slot_costs;
  d["outage_rate"] = m.outage_rate;
  d["mean_outage_probability"] = m.mean_outage_probability;
  return d;
}

LinkGeometry geometry(const Eigen::Vector2d& drone, const Eigen::Vector2d& agv, double altitude) {
  return {drone, agv, altitude};
}

}  // namespace

PYBIND11_MODULE(_lawnctl, m) {
  py::class_<ChannelParams>(m, "ChannelParams")
      .def(py::init<>())
      .def_readwrite("alpha0", &ChannelParams::alpha0)
      .def_readwrite("noise_power", &ChannelParams::noise_power)
      .def_readwrite("bandwidth", &ChannelParams::bandwidth)
      .def_readwrite("bler", &ChannelParams::bler)
      .def_readwrite("blocklength", &ChannelParams::blocklength)
      .def_readwrite("a_los", &ChannelParams::a_los)
      .def_readwrite("b_los", &ChannelParams::b_los)
      .def_readwrite("rate_threshold", &ChannelParams::rate_threshold)
      .def_readwrite("infinite_blocklength", &ChannelParams::infinite_blocklength)
      .def("validate", &ChannelParams::validate);

  m.def("fbl_rate", &fbl_rate, py::arg("snr"), py::arg("params"));
  m.def("snr_threshold", py::overload_cast<const ChannelParams&>(&snr_threshold), py::arg("params"));
  m.def(
      "outage_probability",
      [](const Eigen::Vector2d& drone, const Eigen::Vector2d& agv, double altitude, double power,
         const ChannelParams& params) {
        return outage_probability(geometry(drone, agv, altitude), power, params);
      },
      py::arg("drone_xy"), py::arg("agv_xy"), py::arg("altitude"), py::arg("power"), py::arg("params"));
  m.def(
      "link_budget",
      [](const Eigen::Vector2d& drone, const Eigen::Vector2d& agv, double altitude, double power,
         const ChannelParams& params) {
        const LinkBudget b = link_budget(geometry(drone, agv, altitude), power, params, snr_threshold(params));
        py::dict d;
        d["distance"] = b.distance;
        d["elevation_deg"] = b.elevation_deg;
        d["p_los"] = b.p_los;
        d["snr_threshold"] = b.snr_threshold;
        d["survival"] = b.survival;
        d["outage"] = b.outage;
        return d;
      },
      py::arg("drone_xy"), py::arg("agv_xy"), py::arg("altitude"), py::arg("power"), py::arg("params"));
  m.def("project_capped_simplex", &project_capped_simplex, py::arg("v"), py::arg("p_max"));

  m.def("default_config", [] { return serialize_config(default_config()); },
        "Default scenario in the key = value text format.");

  m.def(
      "run",
      [](std::optional<std::string> config, std::optional<std::uint64_t> seed) {
        const ScenarioConfig cfg = config_from(config, seed);
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run(cfg);
        }
        const auto n = static_cast<Eigen::Index>(r.log.slots.size());
        const int k = cfg.agv_count();
        Eigen::MatrixXd waypoint(n, 2), power(n, k), error(n, k);
        std::vector<int> iterations;
        std::vector<bool> converged;
        for (Eigen::Index i = 0; i < n; ++i) {
          const SlotRecord& rec = r.log.slots[static_cast<std::size_t>(i)];
          waypoint.row(i) = rec.decision.waypoint.transpose();
          power.row(i) = rec.decision.power.transpose();
          for (int j = 0; j < k; ++j) error(i, j) = rec.tracking_error[static_cast<std::size_t>(j)];
          iterations.push_back(rec.decision.iterations);
          converged.push_back(rec.decision.converged);
        }
        py::dict d = metrics_dict(r.metrics);
        d["waypoint"] = waypoint;
        d["power"] = power;
        d["tracking_error"] = error;
        d["iterations"] = iterations;
        d["converged"] = converged;
        return d;
      },
      py::arg("config") = py::none(), py::arg("seed") = py::none(),
      "Runs one episode. `config` is scenario text; defaults are used when omitted.");

  m.def(
      "sweep",
      [](const std::string& axis, const std::vector<double>& values, std::optional<std::string> config,
         std::optional<std::uint64_t> seed, int jobs, int replications) {
        const ScenarioConfig cfg = config_from(config, seed);
        const SweepAxis a = parse_sweep_axis(axis);
        std::vector<SweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = sweep(cfg, a, values, jobs, replications);
        }
        py::list out;
        for (const SweepRow& row : rows) {
          py::dict d = metrics_dict(row.metrics);
          d["value"] = row.value;
          d["ok"] = row.ok;
          d["error"] = row.error;
          out.append(d);
        }
        return out;
      },
      py::arg("axis"), py::arg("values"), py::arg("config") = py::none(), py::arg("seed") = py::none(),
      py::arg("jobs") = 1, py::arg("replications") = 1);
}
