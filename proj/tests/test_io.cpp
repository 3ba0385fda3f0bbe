#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "strata/config_io.hpp"
#include "strata/report.hpp"
#include "strata/robot.hpp"
#include "strata/scenario.hpp"

using namespace strata;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("strata_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(STRATA_CLI) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("config round trip") {
    PlannerConfig cfg;
    cfg.weights = {2.5, 1.1};
    cfg.heuristic = HeuristicKind::dijkstra;
    cfg.mode = LevelMode::l2_only;
    cfg.costs.step_effort = 3.25;
    cfg.robot.base_length = 0.9;
    cfg.costs.landing_options_l2 = 3;
    const PlannerConfig back = parse_config(format_config(cfg));
    for (const std::string& k : config_keys()) CHECK(get_config_value(back, k) == get_config_value(cfg, k));
    CHECK(back.weights == cfg.weights);
    CHECK(back.costs.step_effort == 3.25);
    CHECK(get_config_value(PlannerConfig{}, "costs.drive_limit_l1") == "0.04");
  }

  TEST_CASE("config errors") {
    PlannerConfig cfg;
    CHECK_THROWS_AS(set_config_value(cfg, "robot.wheels", "4"), ContractError);
    CHECK_THROWS_AS(set_config_value(cfg, "level1_window", "wide"), ContractError);
    CHECK_THROWS_AS(parse_config("weights = 1.0, 2.0\n"), ContractError);  // must decrease
    CHECK_THROWS_AS(parse_config("level1_window = 10\n"), ContractError);  // larger than Level 2
  }

  TEST_CASE("generators are deterministic and round trip") {
    const fs::path dir = scratch_dir("gen");
    for (const char* kind : {"flat", "corridor", "bar", "stairs", "ramp", "clutter", "composite", "maze", "wall"}) {
      CAPTURE(kind);
      const Scenario a = generate_scenario(kind, {{"seed", "4"}});
      const Scenario b = generate_scenario(kind, {{"seed", "4"}});
      std::ostringstream sa, sb;
      write_height_map(sa, a.map);
      write_height_map(sb, b.map);
      CHECK(sa.str() == sb.str());
      const LevelMaps m = build_levels(a.map, PlannerConfig{});
      const PlannerConfig cfg;
      CHECK(feasible_cost(pose_cost(m, parse_pose(a.start, m.lattice), cfg.robot)));
      CHECK(feasible_cost(pose_cost(m, parse_pose(a.goal, m.lattice), cfg.robot)));

      const Scenario c = load_scenario(save_scenario(a, dir));
      CHECK(c.start == a.start);
      CHECK(c.goal == a.goal);
      CHECK(c.expect_reachable == a.expect_reachable);
      std::ostringstream sc;
      write_height_map(sc, c.map);
      CHECK(sc.str() == sa.str());
    }
    CHECK_THROWS_AS(generate_scenario("volcano"), ContractError);
    CHECK_THROWS_AS(generate_scenario("stairs", {{"count", "-1"}}), ContractError);
    fs::remove_all(dir);
  }

  TEST_CASE("clutter seeds differ") {
    std::ostringstream a, b;
    write_height_map(a, generate_scenario("clutter", {{"seed", "1"}}).map);
    write_height_map(b, generate_scenario("clutter", {{"seed", "2"}}).map);
    CHECK(a.str() != b.str());
  }

  TEST_CASE("pose text") {
    const LevelMaps m = build_levels(generate_scenario("flat").map, PlannerConfig{});
    const Pose p{Level::l1, 12, 30, 7, {1, -2, 0, 3}};
    CHECK(parse_pose(format_pose(p, m.lattice), m.lattice) == p);
    const Pose q{Level::l3, 4, 9, 15, {}};
    CHECK(parse_pose(format_pose(q, m.lattice), m.lattice) == q);
    CHECK_THROWS(parse_pose("L4 1 2 3", m.lattice));
  }

  TEST_CASE("path document") {
    const Scenario s = generate_scenario("stairs");
    const LevelMaps m = build_levels(s.map, PlannerConfig{});
    PlannerConfig cfg;
    cfg.heuristic = HeuristicKind::dijkstra;
    cfg.weights = {1.5};
    const Pose start = parse_pose(s.start, m.lattice);
    const Pose goal = parse_pose(s.goal, m.lattice);
    const PlanResult r = plan(m, start, goal, cfg);
    REQUIRE(r.found);
    const auto doc = nlohmann::json::parse(path_json(r, start, goal, m.lattice));
    CHECK(doc["schema_version"] == kPathSchemaVersion);
    CHECK(doc["found"] == true);
    CHECK(doc["steps"].size() == r.path.steps.size());
    CHECK(doc["steps"][0]["maneuver"] == "start");
    CHECK(doc["steps"].back()["accumulated"].get<double>() == doctest::Approx(r.path.total_cost));
    CHECK(doc["segments"].size() == r.path.segments.size());
    CHECK(doc["stats"]["expansions"].get<std::size_t>() == r.stats.expansions);
    CHECK(doc.contains("timing"));
    CHECK_FALSE(nlohmann::json::parse(path_json(r, start, goal, m.lattice, false)).contains("timing"));
    std::set<std::string> levels;
    for (const auto& st : doc["steps"]) levels.insert(st["level"].get<std::string>());
    CHECK(levels.count("L1") == 1);
  }

  TEST_CASE("command-line exit codes") {
    const fs::path dir = scratch_dir("cli");
    const std::string d = dir.string();
    REQUIRE(run_cli("gen stairs --name s --out-dir " + d) == 0);
    CHECK(fs::exists(dir / "s.scn"));
    CHECK(run_cli("plan --scenario " + d + "/s.scn --heuristic dijkstra --weight 1.5 --out " + d + "/p.json") == 0);
    CHECK(fs::exists(dir / "p.json"));
    CHECK(run_cli("refine --scenario " + d + "/s.scn --heuristic dijkstra --weight 1.5 --out " + d + "/r.json") == 0);
    CHECK(run_cli("plan --scenario " + d + "/missing.scn") == 3);
    CHECK(run_cli("plan --scenario " + d + "/s.scn --set robot.wheels=4 --out " + d + "/bad.json") == 3);
    CHECK_FALSE(fs::exists(dir / "bad.json"));
    REQUIRE(run_cli("gen wall --param height=0.5 --param cells=4 --name w --out-dir " + d) == 0);
    CHECK(run_cli("plan --scenario " + d + "/w.scn --heuristic dijkstra --weight 1.5") == 2);
    REQUIRE(run_cli("gen wall --param height=0.35 --param cells=1 --name t --out-dir " + d) == 0);
    CHECK(run_cli("refine --scenario " + d + "/t.scn --heuristic dijkstra --weight 1.25") == 4);
    CHECK(run_cli("bogus") == 3);
    fs::remove_all(dir);
  }
}
