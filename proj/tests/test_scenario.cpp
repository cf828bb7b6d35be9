#include "support.hpp"

#include "lawn/reference_path.hpp"
#include "lawn/scenario.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

using namespace lawn;
using lawn::testing::Gen;

namespace {

ScenarioConfig random_config(Gen& gen) {
  ScenarioConfig c = default_config();
  c.slot_duration_s = gen.uniform(0.1, 1.0);
  c.slots = gen.integer(1, 300);
  c.duration_s = c.slots * c.slot_duration_s;
  c.altitude = gen.uniform(10, 200);
  c.drone_vmax = gen.uniform(5, 40);
  c.drone_start = gen.point(0, 200);
  c.channel.alpha0 = gen.log_uniform(1e-7, 1e-3);
  c.channel.bler = gen.log_uniform(1e-9, 0.1);
  c.channel.blocklength = gen.integer(16, 100000);
  c.channel.rate_threshold = gen.uniform(1e5, 2e7);
  c.channel_mode = static_cast<ChannelMode>(gen.integer(0, 2));
  c.control.du_max = gen.uniform(0.1, 3);
  c.q1_diag = gen.vector(6, 0.0, 2.0);
  c.horizon = gen.integer(1, 20);
  c.power_budget = gen.uniform(0.01, 20);
  c.pgd.literal_alg1 = gen.integer(0, 1) == 1;
  c.seed = static_cast<std::uint64_t>(gen.integer(0, 1 << 30)) << 20;
  c.allocator = static_cast<AllocatorMode>(gen.integer(0, 1));
  c.trajectory_mode = static_cast<TrajectoryMode>(gen.integer(0, 1));
  c.straight_flight.heading_deg = gen.uniform(-180, 180);
  c.agv_paths.push_back(parse_path("circle 100 100 " + std::to_string(gen.uniform(1, 50)) + " 0.1 0.3"));
  return c;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("defaults") {
  CHECK(parse_config("") == default_config());
  CHECK(parse_config("# nothing here\n\n   \n") == default_config());
  const ScenarioConfig c = default_config();
  CHECK(c.agv_count() == 4);
  CHECK(c.duration_s == 60.0);
  CHECK(c.slots == 120);
  CHECK(c.slot_duration_s == 0.5);
  CHECK(c.altitude == 50.0);
  CHECK(c.channel.alpha0 == doctest::Approx(1e-5));
  CHECK(c.channel.noise_power == doctest::Approx(1e-13));
  CHECK(c.channel.bler == 1e-6);
  CHECK(c.power_budget == 1.0);
  CHECK(c.horizon == 10);
  CHECK(load_config(LAWNCTL_SOURCE_DIR "/scenarios/default.cfg") == default_config());
}

TEST_CASE("round trip") {
  CHECK(parse_config(serialize_config(default_config())) == default_config());
  CHECK(parse_config(serialize_config(default_config()), false) == default_config());
  Gen gen(61);
  for (int i = 0; i < 50; ++i) {
    const ScenarioConfig c = random_config(gen);
    const std::string text = serialize_config(c);
    const ScenarioConfig back = parse_config(text, false);
    CHECK(back == c);
    CHECK(serialize_config(back) == text);
  }
}

TEST_CASE("validation errors name the field") {
  CHECK_THROWS_WITH_AS(parse_config("duration_s = 60\nslots = 121\n"), doctest::Contains("slots"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config("bogus = 1\n"), doctest::Contains("bogus: unknown key (line 1)"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config("seed = 1\nseed = 2\n"), doctest::Contains("line 2"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config("channel.alpha0 = 1e-5\nchannel.alpha0_db = -50\n"),
                       doctest::Contains("more than once"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config("horizon = 0\n"), doctest::Contains("horizon"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config("channel.bler = 2\n"), doctest::Contains("channel.bler"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config("horizon = ten\n"), doctest::Contains("horizon"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config("seed = 3\n", false), doctest::Contains("missing"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config("agv.1 = stationary 1 1\n"), doctest::Contains("agv.0"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config("drone_start = 500 0\n"), doctest::Contains("drone_start"),
                       std::invalid_argument);
  CHECK_THROWS_AS(parse_config("no equals sign\n"), std::invalid_argument);
  CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), std::runtime_error);
}

TEST_CASE("decibel aliases") {
  const ScenarioConfig c = parse_config("channel.alpha0_db = -40\nchannel.noise_power_dbm = -90\n");
  CHECK(c.channel.alpha0 == doctest::Approx(1e-4));
  CHECK(c.channel.noise_power == doctest::Approx(1e-12));
}

TEST_CASE("enum names") {
  for (auto m : {ChannelMode::fbl, ChannelMode::ibl, ChannelMode::ideal}) {
    CHECK(parse_channel_mode(to_string(m)) == m);
  }
  for (auto m : {AllocatorMode::proposed, AllocatorMode::epa}) CHECK(parse_allocator(to_string(m)) == m);
  for (auto m : {TrajectoryMode::proposed, TrajectoryMode::straight_flight}) {
    CHECK(parse_trajectory_mode(to_string(m)) == m);
  }
  CHECK_THROWS_AS(parse_allocator("greedy"), std::invalid_argument);
}

TEST_CASE("path specs") {
  for (const std::string s : {"stationary 3 4", "circle 100 100 20 0.25 1.5",
                              "waypoints 2 : 0 0, 10 0, 10 10"}) {
    CHECK(parse_path(format_path(parse_path(s))) == parse_path(s));
  }
  CHECK_THROWS_AS(parse_path("waypoints 2 : 1 1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_path("spiral 1 2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_path("stationary 1"), std::invalid_argument);
}

TEST_CASE("reference paths") {
  const auto still = reference_path(parse_path("stationary 7 9"), 10, 0.5);
  for (const auto& s : still) {
    CHECK(s.state.position == Eigen::Vector2d(7, 9));
    CHECK(s.state.velocity.norm() == 0.0);
    CHECK(s.prev_accel.norm() == 0.0);
  }

  const auto line = reference_path(parse_path("waypoints 2 : 0 0, 100 0"), 20, 0.5);
  for (std::size_t n = 1; n < line.size(); ++n) {
    CHECK((line[n].state.position - line[n - 1].state.position).norm() == doctest::Approx(1.0));
  }

  // L-shaped path: the corner is reached at t = 5 (slot 10).
  const auto ell = reference_path(parse_path("waypoints 2 : 0 0, 10 0, 10 10"), 20, 0.5);
  for (std::size_t n = 0; n < 10; ++n) {
    CHECK((ell[n].state.velocity - Eigen::Vector2d(2, 0)).norm() < 1e-12);
  }
  for (std::size_t n = 10; n < 19; ++n) {
    CHECK((ell[n].state.velocity - Eigen::Vector2d(0, 2)).norm() < 1e-12);
  }
  CHECK(ell.back().state.velocity == ell[ell.size() - 2].state.velocity);

  const auto end = reference_path(parse_path("waypoints 2 : 0 0, 3 0"), 10, 0.5);
  CHECK(end.back().state.position == Eigen::Vector2d(3, 0));

  const PathSpec circ = parse_path("circle 0 0 10 0.5 0");
  for (double t : {0.0, 1.0, 7.3}) CHECK(path_position(circ, t).norm() == doctest::Approx(10.0));
  CHECK_THROWS_AS(reference_path(circ, 0, 0.5), std::invalid_argument);
}
