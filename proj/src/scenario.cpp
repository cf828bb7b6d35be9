#include "lawn/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lawn {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

double to_double(const std::string& tok) {
  double v = 0.0;
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end) throw std::invalid_argument("not a number: '" + tok + "'");
  return v;
}

template <typename Int>
Int to_int(const std::string& tok) {
  Int v = 0;
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end) throw std::invalid_argument("not an integer: '" + tok + "'");
  return v;
}

bool to_bool(const std::string& tok) {
  if (tok == "true" || tok == "1") return true;
  if (tok == "false" || tok == "0") return false;
  throw std::invalid_argument("not a boolean: '" + tok + "'");
}

std::vector<double> to_doubles(const std::string& s, std::size_t count) {
  const auto toks = split_ws(s);
  if (toks.size() != count) {
    throw std::invalid_argument("expected " + std::to_string(count) + " numbers, got " +
                                std::to_string(toks.size()));
  }
  std::vector<double> out;
  for (const auto& t : toks) out.push_back(to_double(t));
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_list(std::initializer_list<double> vs) {
  std::string out;
  for (double v : vs) {
    if (!out.empty()) out += ' ';
    out += fmt(v);
  }
  return out;
}

struct Field {
  std::string key;
  std::function<void(ScenarioConfig&, const std::string&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

#define LAWN_DOUBLE(KEY, MEMBER)                                                  \
  Field {                                                                         \
    KEY, [](ScenarioConfig& c, const std::string& v) { c.MEMBER = to_double(v); }, \
        [](const ScenarioConfig& c) { return fmt(c.MEMBER); }                     \
  }
#define LAWN_INT(KEY, MEMBER)                                                   \
  Field {                                                                       \
    KEY, [](ScenarioConfig& c, const std::string& v) { c.MEMBER = to_int<int>(v); }, \
        [](const ScenarioConfig& c) { return std::to_string(c.MEMBER); }        \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      LAWN_DOUBLE("duration_s", duration_s),
      LAWN_INT("slots", slots),
      LAWN_DOUBLE("slot_duration_s", slot_duration_s),
      LAWN_DOUBLE("altitude_m", altitude),
      {"region",
       [](ScenarioConfig& c, const std::string& v) {
         const auto r = to_doubles(v, 4);
         c.region = FlightRegion{r[0], r[1], r[2], r[3]};
       },
       [](const ScenarioConfig& c) {
         return fmt_list({c.region.x_min, c.region.x_max, c.region.y_min, c.region.y_max});
       }},
      {"drone_start",
       [](ScenarioConfig& c, const std::string& v) {
         const auto r = to_doubles(v, 2);
         c.drone_start = {r[0], r[1]};
       },
       [](const ScenarioConfig& c) { return fmt_list({c.drone_start.x(), c.drone_start.y()}); }},
      LAWN_DOUBLE("drone_vmax", drone_vmax),
      LAWN_DOUBLE("channel.alpha0", channel.alpha0),
      LAWN_DOUBLE("channel.noise_power_w", channel.noise_power),
      LAWN_DOUBLE("channel.bandwidth_hz", channel.bandwidth),
      LAWN_DOUBLE("channel.bler", channel.bler),
      LAWN_DOUBLE("channel.blocklength", channel.blocklength),
      LAWN_DOUBLE("channel.a_los", channel.a_los),
      LAWN_DOUBLE("channel.b_los", channel.b_los),
      LAWN_DOUBLE("channel.rate_threshold_bps", channel.rate_threshold),
      {"channel.mode",
       [](ScenarioConfig& c, const std::string& v) { c.channel_mode = parse_channel_mode(v); },
       [](const ScenarioConfig& c) { return to_string(c.channel_mode); }},
      LAWN_DOUBLE("control.du_max", control.du_max),
      LAWN_DOUBLE("control.u_max", control.u_max),
      {"weights.q1",
       [](ScenarioConfig& c, const std::string& v) {
         const auto toks = split_ws(v);
         if (toks.size() == 1) {
           c.q1_diag = Vec6::Constant(to_double(toks[0]));
           return;
         }
         const auto r = to_doubles(v, 6);
         for (int i = 0; i < 6; ++i) c.q1_diag[i] = r[static_cast<std::size_t>(i)];
       },
       [](const ScenarioConfig& c) {
         const auto& q = c.q1_diag;
         return fmt_list({q[0], q[1], q[2], q[3], q[4], q[5]});
       }},
      {"weights.q2",
       [](ScenarioConfig& c, const std::string& v) {
         const auto toks = split_ws(v);
         if (toks.size() == 1) {
           c.q2_diag = Eigen::Vector2d::Constant(to_double(toks[0]));
           return;
         }
         const auto r = to_doubles(v, 2);
         c.q2_diag = {r[0], r[1]};
       },
       [](const ScenarioConfig& c) { return fmt_list({c.q2_diag[0], c.q2_diag[1]}); }},
      LAWN_INT("horizon", horizon),
      LAWN_DOUBLE("power_budget_w", power_budget),
      LAWN_DOUBLE("pgd.initial_step", pgd.initial_step),
      LAWN_DOUBLE("pgd.armijo", pgd.armijo),
      LAWN_DOUBLE("pgd.backtrack", pgd.backtrack),
      LAWN_DOUBLE("pgd.tolerance", pgd.tolerance),
      LAWN_INT("pgd.max_iterations", pgd.max_iterations),
      {"pgd.literal_alg1",
       [](ScenarioConfig& c, const std::string& v) { c.pgd.literal_alg1 = to_bool(v); },
       [](const ScenarioConfig& c) { return std::string(c.pgd.literal_alg1 ? "true" : "false"); }},
      LAWN_DOUBLE("sca.tolerance", sca.tolerance),
      LAWN_INT("sca.max_iterations", sca.max_iterations),
      LAWN_DOUBLE("ao.tolerance", ao.tolerance),
      LAWN_INT("ao.max_iterations", ao.max_iterations),
      {"seed",
       [](ScenarioConfig& c, const std::string& v) { c.seed = to_int<std::uint64_t>(v); },
       [](const ScenarioConfig& c) { return std::to_string(c.seed); }},
      {"allocator",
       [](ScenarioConfig& c, const std::string& v) { c.allocator = parse_allocator(v); },
       [](const ScenarioConfig& c) { return to_string(c.allocator); }},
      {"trajectory_mode",
       [](ScenarioConfig& c, const std::string& v) { c.trajectory_mode = parse_trajectory_mode(v); },
       [](const ScenarioConfig& c) { return to_string(c.trajectory_mode); }},
      LAWN_DOUBLE("straight_flight.speed", straight_flight.speed),
      LAWN_DOUBLE("straight_flight.heading_deg", straight_flight.heading_deg),
  };
  return table;
}

#undef LAWN_DOUBLE
#undef LAWN_INT

// Alternate spellings in decibels; each maps onto a linear field.
const std::map<std::string, std::pair<std::string, std::function<void(ScenarioConfig&, double)>>>&
db_aliases() {
  static const std::map<std::string,
                        std::pair<std::string, std::function<void(ScenarioConfig&, double)>>>
      table = {
          {"channel.alpha0_db",
           {"channel.alpha0",
            [](ScenarioConfig& c, double db) { c.channel.alpha0 = std::pow(10.0, db / 10.0); }}},
          {"channel.noise_power_dbm",
           {"channel.noise_power_w",
            [](ScenarioConfig& c, double dbm) {
              c.channel.noise_power = std::pow(10.0, (dbm - 30.0) / 10.0);
            }}},
      };
  return table;
}

const std::string kAgvPrefix = "agv.";

}  // namespace

PathSpec parse_path(const std::string& text) {
  const std::string t = trim(text);
  const auto kind_end = t.find_first_of(" \t");
  const std::string kind = t.substr(0, kind_end);
  const std::string rest = kind_end == std::string::npos ? std::string() : t.substr(kind_end);
  PathSpec spec;
  if (kind == "stationary") {
    const auto v = to_doubles(rest, 2);
    spec.kind = PathSpec::Kind::stationary;
    spec.points = {Eigen::Vector2d(v[0], v[1])};
  } else if (kind == "circle") {
    const auto v = to_doubles(rest, 5);
    spec.kind = PathSpec::Kind::circle;
    spec.center = {v[0], v[1]};
    spec.radius = v[2];
    spec.omega = v[3];
    spec.phase = v[4];
    if (!(spec.radius > 0.0)) throw std::invalid_argument("circle radius must be positive");
  } else if (kind == "waypoints") {
    const auto colon = rest.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("waypoints path needs '<speed> : x y, x y, ...'");
    }
    spec.kind = PathSpec::Kind::waypoints;
    spec.speed = to_doubles(rest.substr(0, colon), 1)[0];
    if (!(spec.speed > 0.0)) throw std::invalid_argument("waypoint speed must be positive");
    std::istringstream pts(rest.substr(colon + 1));
    for (std::string item; std::getline(pts, item, ',');) {
      if (trim(item).empty()) continue;
      const auto v = to_doubles(item, 2);
      spec.points.emplace_back(v[0], v[1]);
    }
    if (spec.points.size() < 2) {
      throw std::invalid_argument("waypoints path needs at least 2 points");
    }
  } else {
    throw std::invalid_argument("unknown path kind '" + kind + "'");
  }
  return spec;
}

std::string format_path(const PathSpec& spec) {
  switch (spec.kind) {
    case PathSpec::Kind::stationary:
      return "stationary " + fmt_list({spec.points.at(0).x(), spec.points.at(0).y()});
    case PathSpec::Kind::circle:
      return "circle " + fmt_list({spec.center.x(), spec.center.y(), spec.radius, spec.omega,
                                   spec.phase});
    case PathSpec::Kind::waypoints: {
      std::string out = "waypoints " + fmt(spec.speed) + " :";
      for (std::size_t i = 0; i < spec.points.size(); ++i) {
        out += (i ? ", " : " ") + fmt_list({spec.points[i].x(), spec.points[i].y()});
      }
      return out;
    }
  }
  return {};
}

std::string to_string(ChannelMode m) {
  switch (m) {
    case ChannelMode::fbl: return "fbl";
    case ChannelMode::ibl: return "ibl";
    case ChannelMode::ideal: return "ideal";
  }
  return {};
}

std::string to_string(AllocatorMode m) {
  return m == AllocatorMode::proposed ? "proposed" : "epa";
}

std::string to_string(TrajectoryMode m) {
  return m == TrajectoryMode::proposed ? "proposed" : "straight_flight";
}

ChannelMode parse_channel_mode(const std::string& s) {
  if (s == "fbl") return ChannelMode::fbl;
  if (s == "ibl") return ChannelMode::ibl;
  if (s == "ideal") return ChannelMode::ideal;
  throw std::invalid_argument("unknown channel mode '" + s + "' (fbl, ibl, ideal)");
}

AllocatorMode parse_allocator(const std::string& s) {
  if (s == "proposed") return AllocatorMode::proposed;
  if (s == "epa") return AllocatorMode::epa;
  throw std::invalid_argument("unknown allocator '" + s + "' (proposed, epa)");
}

TrajectoryMode parse_trajectory_mode(const std::string& s) {
  if (s == "proposed") return TrajectoryMode::proposed;
  if (s == "straight_flight" || s == "sf") return TrajectoryMode::straight_flight;
  throw std::invalid_argument("unknown trajectory mode '" + s + "' (proposed, straight_flight)");
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& msg) {
    throw std::invalid_argument(field + ": " + msg);
  };
  auto nested = [&](const std::string& prefix, const auto& sub) {
    try {
      sub.validate();
    } catch (const std::invalid_argument& e) {
      const std::string what = e.what();
      throw std::invalid_argument(what.rfind(prefix, 0) == 0 ? what : prefix + what);
    }
  };

  if (!(duration_s > 0.0)) fail("duration_s", "must be positive");
  if (slots < 0) fail("slots", "must be nonnegative");
  if (!(slot_duration_s > 0.0)) fail("slot_duration_s", "must be positive");
  if (std::abs(duration_s - slots * slot_duration_s) > 1e-9 * std::max(1.0, duration_s)) {
    fail("slots", "duration_s must equal slots * slot_duration_s (" + fmt(duration_s) +
                      " vs " + std::to_string(slots) + " * " + fmt(slot_duration_s) + ")");
  }
  if (!(altitude > 0.0)) fail("altitude_m", "must be positive");
  nested("region.", region);
  if (!region.contains(drone_start, 0.0)) fail("drone_start", "must lie inside the region");
  if (!(drone_vmax > 0.0)) fail("drone_vmax", "must be positive");
  if (agv_paths.empty()) fail("agv", "at least one AGV path is required");
  nested("channel.", channel);
  nested("control.", control);
  for (int i = 0; i < 6; ++i) {
    if (!(q1_diag[i] >= 0.0)) fail("weights.q1", "entries must be nonnegative");
  }
  for (int i = 0; i < 2; ++i) {
    if (!(q2_diag[i] > 0.0)) fail("weights.q2", "entries must be positive");
  }
  if (horizon < 1) fail("horizon", "must be >= 1");
  if (!(power_budget > 0.0)) fail("power_budget_w", "must be positive");
  nested("", pgd);
  nested("", sca);
  nested("", ao);
  if (!(straight_flight.speed >= 0.0)) fail("straight_flight.speed", "must be nonnegative");
  if (straight_flight.speed > drone_vmax) fail("straight_flight.speed", "exceeds drone_vmax");
  if (!std::isfinite(straight_flight.heading_deg)) fail("straight_flight.heading_deg", "must be finite");
}

ScenarioConfig default_config() {
  ScenarioConfig c;
  c.drone_vmax = 20.0;
  c.channel.rate_threshold = 10.5e6;
  c.agv_paths = {
      parse_path("waypoints 2 : 20 120, 40 140, 20 160, 40 180, 60 160, 80 180, 100 160"),
      parse_path("waypoints 2 : 20 20, 60 20, 60 50, 30 50, 30 80, 70 80"),
      parse_path("waypoints 2 : 180 20, 140 20, 160 50, 120 50, 140 80, 100 80"),
      parse_path("waypoints 2 : 180 180, 180 140, 140 160, 150 120, 110 130"),
  };
  return c;
}

ScenarioConfig parse_config(const std::string& text, bool fill_defaults) {
  ScenarioConfig cfg = default_config();
  if (!fill_defaults) cfg.agv_paths.clear();
  bool paths_reset = false;

  std::set<std::string> seen;
  std::map<int, PathSpec> paths;
  std::istringstream in(text);
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto context = [&](const std::string& msg) {
      return key + ": " + msg + " (line " + std::to_string(line_no) + ")";
    };

    std::string canonical = key;
    if (auto alias = db_aliases().find(key); alias != db_aliases().end()) canonical = alias->second.first;
    if (!seen.insert(canonical).second) throw std::invalid_argument(context("given more than once"));

    try {
      if (key.rfind(kAgvPrefix, 0) == 0) {
        const int idx = to_int<int>(key.substr(kAgvPrefix.size()));
        if (idx < 0) throw std::invalid_argument("index must be nonnegative");
        paths[idx] = parse_path(value);
        paths_reset = true;
        continue;
      }
      if (auto alias = db_aliases().find(key); alias != db_aliases().end()) {
        alias->second.second(cfg, to_double(value));
        continue;
      }
      bool found = false;
      for (const auto& f : fields()) {
        if (f.key == key) {
          f.set(cfg, value);
          found = true;
          break;
        }
      }
      if (!found) throw std::invalid_argument("unknown key");
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(context(e.what()));
    }
  }

  if (paths_reset) {
    cfg.agv_paths.clear();
    int expected = 0;
    for (const auto& [idx, spec] : paths) {
      if (idx != expected) {
        throw std::invalid_argument("agv." + std::to_string(expected) + ": missing (indices must be 0..K-1)");
      }
      cfg.agv_paths.push_back(spec);
      ++expected;
    }
  }

  if (!fill_defaults) {
    for (const auto& f : fields()) {
      if (!seen.count(f.key)) throw std::invalid_argument(f.key + ": missing");
    }
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& path, bool fill_defaults) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), fill_defaults);
}

std::string serialize_config(const ScenarioConfig& cfg) {
  std::string out;
  for (const auto& f : fields()) out += f.key + " = " + f.get(cfg) + "\n";
  for (std::size_t i = 0; i < cfg.agv_paths.size(); ++i) {
    out += kAgvPrefix + std::to_string(i) + " = " + format_path(cfg.agv_paths[i]) + "\n";
  }
  return out;
}

}  // namespace lawn
