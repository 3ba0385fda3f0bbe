#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "strata/scenario.hpp"
#include "strata/search.hpp"

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

double plan_cost(const Problem& p, PlannerConfig cfg) {
  const PlanResult r = plan(p.maps, p.start, p.goal, cfg);
  return r.found ? r.path.total_cost : std::numeric_limits<double>::infinity();
}

}  // namespace

TEST_SUITE("search") {
  TEST_CASE("start equal to goal") {
    const Problem p = load("flat");
    PlannerConfig cfg;
    cfg.weights = {1.0};
    const PlanResult r = plan(p.maps, p.start, p.start, cfg);
    REQUIRE(r.found);
    CHECK(r.path.total_cost == 0.0);
    CHECK(r.path.steps.size() == 1);
  }

  TEST_CASE("straight drive on flat ground costs its length") {
    Problem p = load("flat", {{"size_x", "5"}, {"size_y", "3"}});
    p.start = Pose{Level::l1, 40, 60, 0, {}};
    p.goal = Pose{Level::l1, 120, 60, 0, {}};
    PlannerConfig cfg;
    cfg.weights = {1.0};
    for (LevelMode mode : {LevelMode::l1_only, LevelMode::combined}) {
      cfg.mode = mode;
      CHECK(plan_cost(p, cfg) == doctest::Approx(2.0).epsilon(0.05));
    }
  }

  TEST_CASE("invalid queries") {
    const Problem p = load("flat");
    const PlannerConfig cfg;
    CHECK_THROWS_AS(plan(p.maps, Pose{Level::l1, -4, 2, 0, {}}, p.goal, cfg), ContractError);
    CHECK_THROWS_AS(plan(p.maps, p.start, Pose{Level::l1, 2, 2, 0, {}}, cfg), ContractError);
  }

  TEST_CASE("a closed wall is unreachable") {
    const Problem p = load("wall", {{"height", "0.5"}, {"cells", "4"}});
    PlannerConfig cfg;
    cfg.heuristic = HeuristicKind::dijkstra;
    cfg.weights = {1.5};
    const PlanResult r = plan(p.maps, p.start, p.goal, cfg);
    CHECK_FALSE(r.found);
    CHECK_FALSE(r.stats.budget_exhausted);
  }

  TEST_CASE("euclidean heuristic") {
    const Problem p = load("flat", {{"size_x", "12"}});
    const RobotGeometry robot;
    const Pose a{Level::l1, 40, 60, 0, {}};
    CHECK(euclidean_heuristic(p.maps.lattice, a, Pose{Level::l1, 440, 60, 0, {}}, robot) == doctest::Approx(10.0));
    const double r = 0.5 * std::hypot(robot.base_length, robot.base_width);
    CHECK(euclidean_heuristic(p.maps.lattice, a, Pose{Level::l1, 40, 60, 32, {}}, robot) ==
          doctest::Approx(std::numbers::pi * r));
    // Translation dominates once it is longer than the turn.
    CHECK(euclidean_heuristic(p.maps.lattice, a, Pose{Level::l1, 440, 60, 32, {}}, robot) == doctest::Approx(10.0));
    CHECK(euclidean_heuristic(p.maps.lattice, Pose{Level::l3, 10, 15, 0, {}}, a, robot) ==
          doctest::Approx(0.0).epsilon(1e-9));
  }

  TEST_CASE("dijkstra field") {
    const Problem p = load("flat", {{"size_x", "8"}, {"size_y", "4"}});
    PlannerConfig cfg;
    const Pose goal{Level::l1, 280, 80, 0, {}};
    const DijkstraField field(p.maps, goal, cfg);
    CHECK(field.lookup(goal) == 0.0);
    for (int x : {40, 120, 200}) {
      const Pose q{Level::l1, x, 80, 0, {}};
      const double d = (280 - x) * 0.025;
      CHECK(field.lookup(q) == doctest::Approx(d).epsilon(0.05));
    }
    CHECK(field.at(-1, 0, 0) == std::numeric_limits<double>::infinity());

    cfg.mode = LevelMode::l3_only;
    cfg.heuristic = HeuristicKind::dijkstra;
    cfg.weights = {1.0};
    const Pose start{Level::l1, 40, 100, 0, {}};
    const PlanResult r = plan(p.maps, start, goal, cfg, &field);
    REQUIRE(r.found);
    CHECK(r.path.total_cost == doctest::Approx(field.lookup(start)).epsilon(1e-4));
  }

  TEST_CASE("anytime iterations never get worse") {
    const Problem p = load("stairs");
    PlannerConfig cfg;
    cfg.heuristic = HeuristicKind::dijkstra;
    cfg.weights = {3.0, 2.0, 1.5, 1.25};
    const PlanResult r = plan(p.maps, p.start, p.goal, cfg);
    REQUIRE(r.found);
    REQUIRE(r.stats.iterations.size() == 4);
    for (std::size_t i = 1; i < r.stats.iterations.size(); ++i)
      CHECK(r.stats.iterations[i].cost <= r.stats.iterations[i - 1].cost + 1e-9);
    CHECK(r.path.total_cost == doctest::Approx(r.stats.iterations.back().cost));
  }

  TEST_CASE("combined paths respect the level windows") {
    const Problem p = load("stairs");
    PlannerConfig cfg;
    cfg.heuristic = HeuristicKind::dijkstra;
    cfg.weights = {1.5};
    const PlanResult r = plan(p.maps, p.start, p.goal, cfg);
    REQUIRE(r.found);
    const WorldPoint c = p.maps.lattice.world(p.start);
    bool coarse = false;
    double acc = 0.0;
    for (const PathStep& s : r.path.steps) {
      const WorldPoint w = p.maps.lattice.world(s.pose);
      const double d = std::max(std::abs(w.x - c.x), std::abs(w.y - c.y));
      if (s.pose.level == Level::l1) CHECK(d <= 0.5 * cfg.level1_window + 1e-9);
      if (s.pose.level == Level::l2) CHECK(d <= 0.5 * cfg.level2_window + 1e-9);
      coarse |= s.pose.level != Level::l1;
      acc += s.cost;
      CHECK(s.accumulated == doctest::Approx(acc));
    }
    CHECK(coarse);
    CHECK(r.path.steps.back().accumulated == doctest::Approx(r.path.total_cost));
    CHECK(goal_reached(r.path.steps.back().pose, p.goal, false));
    std::size_t covered = 0;
    for (const Segment& seg : r.path.segments) {
      CHECK(seg.first == covered);
      covered = seg.last + 1;
    }
    CHECK(covered == r.path.steps.size());
  }

  TEST_CASE("level-1 search matches a brute-force optimum") {
    std::mt19937 rng(21);
    PlannerConfig cfg;
    cfg.mode = LevelMode::l1_only;
    int checked = 0;
    for (int trial = 0; trial < 100 && checked < 4; ++trial) {
      const LevelMaps m = build_levels(oracle::random_small_map(rng, 40, 40), cfg);
      std::uniform_int_distribution<int> u(0, 39), ut(0, 63);
      auto pick = [&]() -> std::optional<Pose> {
        for (int k = 0; k < 200; ++k) {
          const Pose q{Level::l1, u(rng), u(rng), ut(rng), {}};
          if (feasible_cost(pose_cost(m, q, cfg.robot))) return q;
        }
        return std::nullopt;
      };
      const auto s = pick(), g = pick();
      if (!s || !g) continue;
      const double opt = oracle::level1_optimum(m, *s, *g, cfg);
      for (double w : {1.0, 2.0}) {
        cfg.weights = {w};
        const PlanResult r = plan(m, *s, *g, cfg);
        REQUIRE(r.found == std::isfinite(opt));
        if (!r.found) continue;
        CHECK(r.path.total_cost >= opt - 1e-6);
        CHECK(r.path.total_cost <= w * opt + 1e-6);
      }
      ++checked;
    }
    CHECK(checked == 4);
  }
}
