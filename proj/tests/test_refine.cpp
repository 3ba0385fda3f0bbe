#include <doctest.h>

#include <cmath>
#include <set>
#include <tuple>

#include "strata/refine.hpp"
#include "strata/robot.hpp"
#include "strata/scenario.hpp"

using namespace strata;

namespace {

struct Problem {
  LevelMaps maps;
  Pose start;
  Pose goal;
};

Problem load(const std::string& kind, const ParamMap& params = {}) {
  const Scenario s = generate_scenario(kind, params);
  LevelMaps m = build_levels(s.map, PlannerConfig{});
  const Pose a = parse_pose(s.start, m.lattice);
  const Pose b = parse_pose(s.goal, m.lattice);
  return {std::move(m), a, b};
}

PlannerConfig bench_config(double w) {
  PlannerConfig cfg;
  cfg.heuristic = HeuristicKind::dijkstra;
  cfg.weights = {w};
  return cfg;
}

// Dilation of a set of base poses, computed directly.
std::set<std::tuple<int, int, int>> dilate(const std::vector<std::tuple<int, int, int>>& line, int n) {
  std::set<std::tuple<int, int, int>> out;
  for (auto [x, y, t] : line)
    for (int dx = -2; dx <= 2; ++dx)
      for (int dy = -2; dy <= 2; ++dy)
        for (int dt = -1; dt <= 1; ++dt) out.insert({x + dx, y + dy, ((t + dt) % n + n) % n});
  return out;
}

}  // namespace

TEST_SUITE("refine") {
  TEST_CASE("corridor shapes") {
    const Problem p = load("flat", {{"size_x", "6"}});
    const Lattice& lat = p.maps.lattice;

    const Corridor single = build_corridor(lat, {Pose{Level::l1, 60, 60, 10, {}}});
    CHECK(single.size() == 5 * 5 * 3);
    CHECK(single.contains(Pose{Level::l1, 62, 58, 11, {3, 0, 0, -2}}));  // feet are free
    CHECK_FALSE(single.contains(Pose{Level::l1, 63, 60, 10, {}}));
    CHECK_FALSE(single.contains(Pose{Level::l1, 60, 60, 12, {}}));
    CHECK_FALSE(single.contains(Pose{Level::l2, 60, 60, 10, {}}));

    const Corridor line = build_corridor(lat, {Pose{Level::l1, 60, 60, 0, {}}, Pose{Level::l1, 100, 60, 0, {}}});
    std::vector<std::tuple<int, int, int>> raster;
    for (int x = 60; x <= 100; ++x) raster.push_back({x, 60, 0});
    CHECK(line.size() == dilate(raster, 64).size());
    CHECK(line.size() == 45 * 5 * 3);
    CHECK(line.contains(Pose{Level::l1, 80, 62, 63, {}}));
    CHECK_FALSE(line.contains(Pose{Level::l1, 80, 63, 0, {}}));

    // Quarter turn in place, crossing the heading wrap.
    const Corridor turn = build_corridor(lat, {Pose{Level::l1, 60, 60, 56, {}}, Pose{Level::l1, 60, 60, 8, {}}});
    for (int t = 55; t <= 64 + 9; ++t) CHECK(turn.contains(Pose{Level::l1, 60, 60, t % 64, {}}));
    CHECK_FALSE(turn.contains(Pose{Level::l1, 60, 60, 10, {}}));
    CHECK_FALSE(turn.contains(Pose{Level::l1, 60, 60, 54, {}}));
    CHECK(turn.size() == 5 * 5 * 19);
  }

  TEST_CASE("tolerance rule is two-sided and strict") {
    CHECK_FALSE(exceeds_tolerance(100.0, 124.9, 0.25));
    CHECK(exceeds_tolerance(100.0, 125.1, 0.25));
    CHECK_FALSE(exceeds_tolerance(100.0, 75.1, 0.25));
    CHECK(exceeds_tolerance(100.0, 74.9, 0.25));
    CHECK_FALSE(exceeds_tolerance(100.0, 100.0, 0.25));
  }

  TEST_CASE("local goal") {
    const Pose t{Level::l1, 10, 10, 5, {2, 2, 0, 0}};
    CHECK(local_goal_reached(Pose{Level::l1, 10, 10, 5, {}}, LocalGoal{t}));
    CHECK_FALSE(local_goal_reached(Pose{Level::l1, 10, 10, 5, {}}, LocalGoal{t, 0}));
    CHECK(local_goal_reached(Pose{Level::l1, 10, 10, 5, {1, 3, 0, 0}}, LocalGoal{t, 1}));
    CHECK(local_goal_reached(Pose{Level::l1, 11, 9, 6, {}}, LocalGoal{t, -1, true}));
    CHECK_FALSE(local_goal_reached(Pose{Level::l1, 12, 10, 5, {}}, LocalGoal{t, -1, true}));
  }

  TEST_CASE("flat level-2 drive refines with matching cost") {
    const Problem p = load("flat", {{"size_x", "6"}});
    const PlannerConfig cfg;
    const Pose from{Level::l2, 30, 30, 4, {}};
    const auto mv = apply_action(p.maps, from, 1.0, {ManeuverKind::drive, 2, 1}, cfg);
    REQUIRE(mv);
    const RefineOutcome out = refine_l2_segment(p.maps, demote(from), mv->target, mv->cost, cfg);
    CHECK(out.verdict == Verdict::refineable);
    REQUIRE(out.path.steps.size() >= 2);
    CHECK(out.path.steps.front().pose == demote(from));
    CHECK(out.path.steps.back().pose == demote(mv->target));
    CHECK(out.relative_difference <= cfg.refine_tolerance);

    const Corridor c = build_corridor(p.maps.lattice, {demote(from), demote(mv->target)});
    for (const PathStep& s : out.path.steps) {
      CHECK(s.pose.level == Level::l1);
      CHECK(c.contains(s.pose));
    }
  }

  TEST_CASE("benchmark paths refine completely") {
    for (const char* kind : {"flat", "stairs"}) {
      CAPTURE(kind);
      const Problem p = load(kind);
      const PlannerConfig cfg = bench_config(1.5);
      const PlanResult r = plan(p.maps, p.start, p.goal, cfg);
      REQUIRE(r.found);
      const RefinedPath rp = refine_path_to_l1(p.maps, r.path, cfg);
      CHECK(rp.complete);
      CHECK(rp.not_refineable == 0);
      for (const PathStep& s : rp.path.steps) CHECK(s.pose.level == Level::l1);
      CHECK(goal_reached(rp.path.steps.back().pose, p.goal, false));
      CHECK(rp.path.total_cost >= r.path.total_cost - 1e-9);
      for (const SegmentReport& seg : rp.segments) CHECK(seg.verdict == Verdict::refineable);
    }
  }

  TEST_CASE("riser crossed by level-2 pair steps refines into level-1 steps") {
    const Problem p = load("stairs", {{"riser", "0.2"}, {"count", "1"}, {"start_x", "3.0"}});
    PlannerConfig cfg = bench_config(1.25);
    cfg.level1_window = 2.0;
    const PlanResult r = plan(p.maps, p.start, p.goal, cfg);
    REQUIRE(r.found);
    bool pair_step = false;
    for (const PathStep& s : r.path.steps) pair_step |= s.pose.level == Level::l2 && s.label == ManeuverKind::step;
    REQUIRE(pair_step);
    const RefinedPath rp = refine_path_to_l1(p.maps, r.path, cfg);
    CHECK(rp.complete);
    int steps = 0;
    for (const PathStep& s : rp.path.steps) steps += s.label == ManeuverKind::step;
    CHECK(steps >= 4);
  }

  TEST_CASE("a wall thinner than a coarse cell is not refineable") {
    const Problem p = load("wall", {{"height", "0.35"}, {"cells", "1"}});
    const PlannerConfig cfg = bench_config(1.25);
    const PlanResult r = plan(p.maps, p.start, p.goal, cfg);
    REQUIRE(r.found);
    const RefinedPath rp = refine_path_to_l1(p.maps, r.path, cfg);
    CHECK_FALSE(rp.complete);
    CHECK(rp.not_refineable >= 1);
    REQUIRE_FALSE(rp.segments.empty());
    CHECK(rp.segments.back().verdict != Verdict::refineable);
  }

  TEST_CASE("level-3 segment through data missing at level 2") {
    const Scenario s = generate_scenario("flat", {{"size_x", "8"}});
    const PlannerConfig cfg;
    const LevelMaps known = build_levels(s.map, cfg);
    HeightGrid holed = s.map;
    for (int r = 0; r < holed.height(); ++r)
      for (int c = 70; c < 90; ++c) holed[{c, r}] = std::numeric_limits<float>::quiet_NaN();
    const LevelMaps missing = build_levels(holed, cfg);

    std::vector<Pose> run;
    for (int x = 10; x <= 26; ++x) run.push_back(Pose{Level::l3, x, 8, 0, {}});
    const Pose start2{Level::l2, 18, 16, 0, {}};
    const double original = 0.1 * static_cast<double>(run.size());
    CHECK(refine_l3_segment(known, start2, run, original, cfg).verdict == Verdict::refineable);
    CHECK(refine_l3_segment(missing, start2, run, original, cfg).verdict != Verdict::refineable);
  }

  TEST_CASE("execution on a consistent map") {
    const Problem p = load("stairs");
    const Scenario s = generate_scenario("stairs");
    const PlannerConfig cfg = bench_config(1.5);
    const ExecutionResult ex = simulate_execution(s.map, p.start, p.goal, cfg);
    CHECK(ex.reached_goal);
    CHECK(ex.replans == 0);
    CHECK(ex.all_level1);
    for (const PathStep& st : ex.executed.steps) CHECK(st.pose.level == Level::l1);
    const std::string log = execution_log_jsonl(ex, p.maps.lattice);
    CHECK(log.find("\"event\":\"goal\"") != std::string::npos);
    CHECK(log.find("not_refineable") == std::string::npos);
  }

  TEST_CASE("execution with an obstacle missing from the prior map") {
    const Scenario s = generate_scenario("flat", {{"size_x", "12"}, {"size_y", "4"}});
    HeightGrid truth = s.map;
    for (int r = 40; r < 120; ++r)
      for (int c = 320; c < 340; ++c) truth[{c, r}] = 1.0f;
    PlannerConfig cfg = bench_config(1.5);
    cfg.level1_window = 2.0;
    cfg.level2_window = 4.0;
    const LevelMaps m = build_levels(s.map, cfg);
    const Pose start{Level::l1, 40, 80, 0, {}};
    const Pose goal{Level::l1, 440, 80, 0, {}};
    ExecutionOptions opt;
    opt.initial_map = &s.map;
    const ExecutionResult ex = simulate_execution(truth, start, goal, cfg, opt);
    CHECK(ex.replans >= 1);
    CHECK(ex.reached_goal);
    CHECK(ex.all_level1);
    const std::string log = execution_log_jsonl(ex, m.lattice);
    CHECK(log.find("\"event\":\"replanned\"") != std::string::npos);
  }
}
