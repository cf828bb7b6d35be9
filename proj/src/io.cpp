#include "lawn/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lawn {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cell += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(cell);
      cell.clear();
    } else if (ch != '\r') {
      cell += ch;
    }
  }
  out.push_back(cell);
  return out;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

double num(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

const char* kLogHeader =
    "slot,agv_id,pos_x,pos_y,ref_x,ref_y,err_m,power_w,outage_prob,delivered,cost";

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<LogRow> log_rows(const EpisodeLog& log) {
  std::vector<LogRow> rows;
  for (const auto& rec : log.slots) {
    for (std::size_t k = 0; k < rec.states.size(); ++k) {
      LogRow r;
      r.slot = rec.slot;
      r.agv_id = static_cast<int>(k);
      r.pos_x = rec.states[k].state.position.x();
      r.pos_y = rec.states[k].state.position.y();
      r.ref_x = rec.reference_xy[k].x();
      r.ref_y = rec.reference_xy[k].y();
      r.err_m = rec.tracking_error[k];
      r.power_w = rec.decision.power[static_cast<Eigen::Index>(k)];
      r.outage_prob = rec.outage[k];
      r.delivered = rec.delivered[k];
      r.cost = rec.decision.agv_objective[k];
      rows.push_back(r);
    }
  }
  return rows;
}

void write_log_csv(std::ostream& out, const EpisodeLog& log) {
  out << kLogHeader << '\n';
  for (const auto& r : log_rows(log)) {
    out << r.slot << ',' << r.agv_id << ',' << format_double(r.pos_x) << ','
        << format_double(r.pos_y) << ',' << format_double(r.ref_x) << ','
        << format_double(r.ref_y) << ',' << format_double(r.err_m) << ','
        << format_double(r.power_w) << ',' << format_double(r.outage_prob) << ','
        << (r.delivered ? 1 : 0) << ',' << format_double(r.cost) << '\n';
  }
}

std::vector<LogRow> read_log_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kLogHeader) {
    throw std::runtime_error("log csv: unexpected header");
  }
  std::vector<LogRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto c = split_csv(line);
    if (c.size() != 11) {
      throw std::runtime_error("log csv line " + std::to_string(line_no) + ": expected 11 columns");
    }
    LogRow r;
    r.slot = std::stoi(c[0]);
    r.agv_id = std::stoi(c[1]);
    r.pos_x = num(c[2]);
    r.pos_y = num(c[3]);
    r.ref_x = num(c[4]);
    r.ref_y = num(c[5]);
    r.err_m = num(c[6]);
    r.power_w = num(c[7]);
    r.outage_prob = num(c[8]);
    r.delivered = c[9] == "1";
    r.cost = num(c[10]);
    rows.push_back(r);
  }
  return rows;
}

void write_summary_json(std::ostream& out, const MetricsReport& m, std::uint64_t seed) {
  nlohmann::json j;
  j["seed"] = seed;
  j["slots"] = m.slot_costs.size();
  j["total_cost"] = m.total_cost;
  j["rmse_m"] = m.rmse;
  j["cdf_samples_m"] = m.cdf_samples;
  j["outage_rate"] = m.outage_rate;
  j["mean_outage_probability"] = m.mean_outage_probability;
  j["slot_costs"] = m.slot_costs;
  out << j.dump(2) << '\n';
}

MetricsReport read_summary_json(std::istream& in) {
  const nlohmann::json j = nlohmann::json::parse(in);
  MetricsReport m;
  m.total_cost = j.at("total_cost").get<double>();
  m.rmse = j.at("rmse_m").get<std::vector<double>>();
  m.cdf_samples = j.at("cdf_samples_m").get<std::vector<double>>();
  m.outage_rate = j.at("outage_rate").get<std::vector<double>>();
  m.mean_outage_probability = j.at("mean_outage_probability").get<std::vector<double>>();
  m.slot_costs = j.at("slot_costs").get<std::vector<double>>();
  return m;
}

void write_sweep_csv(std::ostream& out, SweepAxis axis, const std::vector<SweepRow>& rows) {
  std::size_t k_count = 0;
  for (const auto& r : rows) k_count = std::max(k_count, r.metrics.rmse.size());
  out << "axis,value,ok,total_cost,mean_rmse,mean_outage_rate";
  for (std::size_t k = 0; k < k_count; ++k) out << ",rmse_" << k;
  out << ",error\n";
  for (const auto& r : rows) {
    out << to_string(axis) << ',' << format_double(r.value) << ',' << (r.ok ? 1 : 0) << ','
        << format_double(r.metrics.total_cost) << ',' << format_double(mean(r.metrics.rmse)) << ','
        << format_double(mean(r.metrics.outage_rate));
    for (std::size_t k = 0; k < k_count; ++k) {
      out << ',' << (k < r.metrics.rmse.size() ? format_double(r.metrics.rmse[k]) : "");
    }
    out << ',' << quote(r.error) << '\n';
  }
}

std::vector<SweepCsvRow> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("sweep csv: empty input");
  const auto header = split_csv(line);
  if (header.size() < 7 || header[0] != "axis" || header.back() != "error") {
    throw std::runtime_error("sweep csv: unexpected header");
  }
  const std::size_t k_count = header.size() - 7;
  std::vector<SweepCsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split_csv(line);
    if (c.size() != header.size()) throw std::runtime_error("sweep csv: column count mismatch");
    SweepCsvRow r;
    r.axis = c[0];
    r.value = num(c[1]);
    r.ok = c[2] == "1";
    r.total_cost = num(c[3]);
    r.mean_rmse = num(c[4]);
    r.mean_outage_rate = num(c[5]);
    for (std::size_t k = 0; k < k_count; ++k) {
      if (!c[6 + k].empty()) r.rmse.push_back(num(c[6 + k]));
    }
    r.error = c.back();
    rows.push_back(r);
  }
  return rows;
}

void write_trajectory_csv(std::ostream& out, const EpisodeLog& log) {
  out << "slot,drone_x,drone_y,objective\n";
  for (const auto& rec : log.slots) {
    out << rec.slot << ',' << format_double(rec.decision.waypoint.x()) << ','
        << format_double(rec.decision.waypoint.y()) << ',' << format_double(rec.cost) << '\n';
  }
}

void write_convergence_csv(std::ostream& out, const EpisodeLog& log) {
  out << "slot,iteration,objective,converged\n";
  for (const auto& rec : log.slots) {
    const auto& trace = rec.decision.objective_trace;
    for (std::size_t i = 0; i < trace.size(); ++i) {
      out << rec.slot << ',' << i << ',' << format_double(trace[i]) << ','
          << (rec.decision.converged ? 1 : 0) << '\n';
    }
  }
}

}  // namespace lawn
