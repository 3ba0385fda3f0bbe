#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "strata/levels.hpp"
#include "strata/robot.hpp"
#include "strata/scenario.hpp"

using namespace strata;

namespace {

constexpr double kPi = std::numbers::pi;

// Height ramp rising along x with the given rise per 2.5 cm cell.
HeightGrid ramp_map(double rise_per_cell, double size = 3.0) {
  const int n = static_cast<int>(std::lround(size / 0.025));
  HeightGrid g(n, n, 0.025, {0, 0}, 0.0f);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) g[{c, r}] = static_cast<float>(c * rise_per_cell);
  return g;
}

double axial_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), kPi);
  return std::min(d, kPi - d);
}

}  // namespace

TEST_SUITE("levels") {
  TEST_CASE("level-1 foot cost") {
    const PlannerConfig cfg;
    const Level1Rep flat = build_level1(HeightGrid(20, 20, 0.025, {0, 0}, 0.0f), cfg);
    for (float v : flat.foot_cost.cells()) CHECK(v == 1.0f);

    const Level1Rep gentle = build_level1(ramp_map(0.02, 1.0), cfg);
    CHECK(gentle.foot_cost[{10, 10}] == doctest::Approx(1.0 + 107.0 * 0.02).epsilon(1e-4));
    CHECK(gentle.foot_cost[{10, 10}] == doctest::Approx(3.14).epsilon(1e-3));

    const Level1Rep steep = build_level1(ramp_map(0.05, 1.0), cfg);
    CHECK(std::isinf(steep.foot_cost[{10, 10}]));

    HeightGrid holes(10, 10, 0.025, {0, 0}, 0.0f);
    holes[{5, 5}] = kUnknown;
    CHECK(std::isinf(build_level1(holes, cfg).foot_cost[{5, 5}]));
  }

  TEST_CASE("level-2 pair cost") {
    const PlannerConfig cfg;
    const LevelMaps flat = build_levels(HeightGrid(120, 120, 0.025, {0, 0}, 0.0f), cfg);
    CHECK(flat.l2.height.width() == 60);
    for (int t = 0; t < 32; ++t) CHECK(flat.l2.pair_cost[t][{30, 30}] == 1.0f);

    const LevelMaps ramp = build_levels(ramp_map(0.01), cfg);
    for (int t : {0, 5, 16, 27}) CHECK(ramp.l2.pair_cost[t][{30, 30}] == doctest::Approx(2.07).epsilon(1e-3));
  }

  TEST_CASE("odd-sized level-2 grid rounds up") {
    const PlannerConfig cfg;
    const Level1Rep l1 = build_level1(HeightGrid(41, 23, 0.025, {0, 0}, 0.0f), cfg);
    const Level2Rep l2 = build_level2(l1, cfg);
    CHECK(l2.height.width() == 21);
    CHECK(l2.height.height() == 12);
  }

  TEST_CASE("circular mean of axial angles") {
    CHECK(circular_mean(std::vector<double>{0.1, -0.1}).angle == doctest::Approx(0.0).epsilon(1e-9));
    const double wrap = circular_mean(std::vector<double>{kPi - 0.05, 0.05}).angle;
    CHECK(axial_distance(wrap, 0.0) < 1e-9);
    CHECK(circular_mean(std::vector<double>{kPi / 4}).angle == doctest::Approx(kPi / 4));
    CHECK_THROWS_AS(circular_mean(std::vector<double>{}), ContractError);

    std::vector<double> a{0.3, 0.5, 2.9, 1.0};
    std::vector<double> twice = a;
    twice.insert(twice.end(), a.begin(), a.end());
    CHECK(circular_mean(twice).angle == doctest::Approx(circular_mean(a).angle));
    const CircularMean opposite = circular_mean(std::vector<double>{0.0, kPi / 2});
    CHECK(opposite.resultant < 1e-9);
  }

  TEST_CASE("class merge and class cost") {
    using T = TerrainClass;
    const std::vector<T> a{T::flat, T::flat, T::rough, T::wall};
    CHECK(merge_classes(a) == T::flat);
    const std::vector<T> b{T::rough, T::step, T::wall, T::unknown};
    CHECK(merge_classes(b) == T::rough);
    const std::vector<T> c{T::wall, T::wall, T::wall, T::flat};
    CHECK(merge_classes(c) == T::wall);
    const std::vector<T> e{T::flat, T::wall, T::flat, T::wall};
    CHECK(merge_classes(e) == T::wall);
    const std::vector<T> f{T::flat, T::step, T::flat, T::step};
    CHECK(merge_classes(f) == T::flat);
    const std::vector<T> d{T::unknown, T::unknown, T::unknown, T::unknown};
    CHECK(merge_classes(d) == T::unknown);

    const CostParams p;
    CHECK(class_cost(T::flat, 0.0, p) == 1.0);
    CHECK(class_cost(T::rough, 0.03, p) == doctest::Approx(1.4));
    CHECK(class_cost(T::step, 0.2, p) == doctest::Approx(76.59));
    CHECK(std::isinf(class_cost(T::wall, 0.5, p)));
    CHECK(std::isnan(class_cost(T::unknown, 0.0, p)));
  }

  TEST_CASE("flat map: no steps, unit costs at every level") {
    const PlannerConfig cfg;
    const LevelMaps m = build_levels(HeightGrid(160, 160, 0.025, {0, 0}, 0.0f), cfg);
    for (TerrainClass c : m.classes_l2.classes) CHECK(c == TerrainClass::flat);
    for (int t = 0; t < 16; ++t) CHECK(m.l3.area_cost[t][{20, 20}] == doctest::Approx(1.0));
  }

  TEST_CASE("staircase risers are step cells oriented along the stair") {
    PlannerConfig cfg;
    const Scenario s = generate_scenario("stairs", {{"riser", "0.15"}, {"tread", "0.3"}, {"count", "4"}});
    const LevelMaps m = build_levels(s.map, cfg);
    const TerrainClassGrid& tc = m.classes_l2;
    const double step = 2.0 * kPi / 16;
    // Riser edges lie at x = 2.0 + k * 0.3.
    for (int k = 0; k < 4; ++k) {
      const double x = 2.0 + 0.3 * k;
      int steps = 0;
      for (int r = 10; r < tc.height - 10; ++r) {
        bool found = false;
        for (int dc = -2; dc <= 1; ++dc) {
          const GridIndex g = {static_cast<int>(std::lround(x / 0.05)) + dc, r};
          if (tc.at(g) != TerrainClass::step) continue;
          found = true;
          CHECK(axial_distance(tc.alpha_at(g), 0.0) < step);
        }
        steps += found;
      }
      CHECK(steps == tc.height - 20);
    }
    // Level-3 step cells carry the same orientation.
    for (std::size_t i = 0; i < m.l3.classes.classes.size(); ++i)
      if (m.l3.classes.classes[i] == TerrainClass::step) CHECK(axial_distance(m.l3.classes.alpha[i], 0.0) < step);
  }

  TEST_CASE("moderate slope without steps is rough") {
    const PlannerConfig cfg;
    const LevelMaps m = build_levels(ramp_map(0.03, 4.0), cfg);
    CHECK(m.classes_l2.at({40, 40}) == TerrainClass::rough);
    CHECK(m.l3.cell_cost[{20, 20}] == doctest::Approx(1.4));
  }

  TEST_CASE("plateaus farther apart than a step are separated by wall") {
    const PlannerConfig cfg;
    HeightGrid g(160, 80, 0.025, {0, 0}, 0.0f);
    for (int r = 0; r < 80; ++r)
      for (int c = 60; c < 80; ++c) g[{c, r}] = 1.0f;  // 0.5 m wide block
    const LevelMaps m = build_levels(g, cfg);
    for (int r = 5; r < 35; ++r) {
      for (int c : {29, 30, 39, 40}) CHECK(m.classes_l2.at({c, r}) == TerrainClass::wall);
      CHECK(m.classes_l2.at({35, r}) == TerrainClass::flat);  // block top
      for (int c = 25; c < 45; ++c) CHECK(m.classes_l2.at({c, r}) != TerrainClass::step);
    }
  }

  TEST_CASE("level-3 area cost is the mean over the contact area") {
    PlannerConfig cfg;
    LevelMaps m = build_levels(HeightGrid(200, 200, 0.025, {0, 0}, 0.0f), cfg);
    TerrainClassGrid classes = m.classes_l2;
    for (int r = 0; r < classes.height; ++r)
      for (int c = 0; c < 50; ++c) classes.classes[classes.offset({c, r})] = TerrainClass::rough;
    m.l3 = build_level3(m.l2, classes, cfg);
    // Level-3 column 25 is the first fully flat one.
    for (int theta : {0, 3, 4}) {
      const Pose p{Level::l3, 25, 25, theta, {}};
      double sum = 0.0;
      int n = 0;
      for (const CellOffset& o : m.l3.contact_area[theta]) {
        sum += (25 + o.dx) < 25 ? 1.4 : 1.0;
        ++n;
      }
      CHECK(pose_cost(m, p, cfg.robot) == doctest::Approx(sum / n));
    }
    CHECK(pose_cost(m, Pose{Level::l3, 12, 25, 0, {}}, cfg.robot) == doctest::Approx(1.4));
    CHECK(pose_cost(m, Pose{Level::l3, 40, 25, 0, {}}, cfg.robot) == doctest::Approx(1.0));

    // One wall cell under the robot makes the pose infeasible.
    classes.classes[classes.offset({80, 50})] = TerrainClass::wall;
    classes.classes[classes.offset({81, 50})] = TerrainClass::wall;
    classes.classes[classes.offset({80, 51})] = TerrainClass::wall;
    m.l3 = build_level3(m.l2, classes, cfg);
    CHECK(std::isinf(pose_cost(m, Pose{Level::l3, 40, 25, 0, {}}, cfg.robot)));
  }

  TEST_CASE("increasing a height difference never lowers a finite cost") {
    const PlannerConfig cfg;
    HeightGrid a = ramp_map(0.004, 2.0);
    HeightGrid b = a;
    for (int r = 30; r < 50; ++r)
      for (int c = 30; c < 50; ++c) b[{c, r}] += static_cast<float>(0.002 * ((c + r) % 3));
    const LevelMaps ma = build_levels(a, cfg), mb = build_levels(b, cfg);
    for (std::size_t i = 0; i < ma.l1.foot_cost.cells().size(); ++i)
      if (mb.l1.diff.cells()[i] >= ma.l1.diff.cells()[i]) CHECK(mb.l1.foot_cost.cells()[i] >= ma.l1.foot_cost.cells()[i]);
  }
}
