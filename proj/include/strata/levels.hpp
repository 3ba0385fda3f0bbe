#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "strata/config.hpp"
#include "strata/gridmap.hpp"
#include "strata/pose.hpp"

namespace strata {

enum class TerrainClass : std::uint8_t { flat = 0, rough = 1, step = 2, wall = 3, unknown = 4 };

/// flat < rough < step < wall; unknown sorts last.
inline int difficulty(TerrainClass c) { return static_cast<int>(c); }
const char* to_string(TerrainClass c);

struct CellOffset {
  int dx = 0;
  int dy = 0;
  friend bool operator==(const CellOffset&, const CellOffset&) = default;
};

/// Offsets of grid cells whose centers fall inside a rectangle given in the
/// robot frame (center at (lon, lat), `length` along the heading), relative
/// to the cell holding the robot reference point.
std::vector<CellOffset> rect_cells(double length, double width, double lon, double lat,
                                   double heading, double resolution);

/// Per-cell terrain class with step orientation (radians in [0, pi), NaN
/// unless the class is step).
struct TerrainClassGrid {
  int width = 0;
  int height = 0;
  double resolution = 0.0;
  WorldPoint origin{};
  std::vector<TerrainClass> classes;
  std::vector<float> alpha;

  bool in_bounds(GridIndex c) const noexcept {
    return c.col >= 0 && c.row >= 0 && c.col < width && c.row < height;
  }
  std::size_t offset(GridIndex c) const noexcept { return static_cast<std::size_t>(c.row) * width + c.col; }
  TerrainClass at(GridIndex c) const noexcept {
    return in_bounds(c) ? classes[offset(c)] : TerrainClass::unknown;
  }
  float alpha_at(GridIndex c) const noexcept { return in_bounds(c) ? alpha[offset(c)] : kUnknown; }
};

struct Level1Rep {
  HeightGrid height;
  DiffGrid diff;
  CostGrid foot_cost;  // >= 1 or +inf
  CostGrid body_cost;  // >= 0 or +inf, orientation independent
};

struct Level2Rep {
  HeightGrid height;
  DiffGrid diff;
  CostGrid body_cost;
  std::vector<CostGrid> pair_cost;  // one grid per orientation (32)
  // Per orientation: cells of the left and right foot area of a pair,
  // relative to the pair center cell, and the two area-center offsets.
  std::vector<std::vector<CellOffset>> left_area;
  std::vector<std::vector<CellOffset>> right_area;
  std::vector<std::array<CellOffset, 2>> area_centers;
  double drive_limit = 0.02;

  bool drivable(GridIndex c) const noexcept {
    const float d = diff.value_or(c, kUnknown);
    return !std::isnan(d) && d <= drive_limit + kHeightEps;
  }
};

/// Bits stored per (orientation, cell) at Level 3.
enum StepFlag : std::uint8_t { kHasStep = 1, kHeadingOk = 2 };

struct Level3Rep {
  HeightGrid height;
  DiffGrid diff;
  TerrainClassGrid classes;
  CostGrid cell_cost;                       // C_c; +inf for wall, NaN for unknown
  std::vector<CostGrid> area_cost;          // per orientation (16); NaN = unknown
  std::vector<CostGrid> relaxed_area_cost;  // unknown in-map cells counted as 1.0
  std::vector<std::vector<std::uint8_t>> step_flags;
  std::vector<std::vector<CellOffset>> contact_area;  // a_r per orientation
};

/// Everything the planner reads, built once from a fine height map.
struct LevelMaps {
  Lattice lattice;
  Level1Rep l1;
  Level2Rep l2;
  TerrainClassGrid classes_l2;
  Level3Rep l3;
};

CostGrid body_cost_map(const HeightGrid& heights, const RobotGeometry& robot, const CostParams& costs);

Level1Rep build_level1(const HeightGrid& heights, const PlannerConfig& cfg);
Level2Rep build_level2(const Level1Rep& l1, const PlannerConfig& cfg);
TerrainClassGrid classify_terrain(const Level2Rep& l2, const PlannerConfig& cfg);
Level3Rep build_level3(const Level2Rep& l2, const TerrainClassGrid& classes, const PlannerConfig& cfg);
LevelMaps build_levels(const HeightGrid& heights, const PlannerConfig& cfg);

struct CircularMean {
  double angle = 0.0;      // [0, pi)
  double resultant = 0.0;  // mean resultant length of the doubled angles, [0, 1]
};

/// Mean direction of axial data (period pi). Throws ContractError on an
/// empty input.
CircularMean circular_mean(std::span<const double> angles);

/// C_c for one cell; `dh` is the cell's height difference in meters.
double class_cost(TerrainClass c, double dh, const CostParams& costs);

/// 2x2 block vote: most members wins, otherwise the least difficult class
/// present, except that a 2-2 tie with wall is wall. Unknown members do not
/// vote.
TerrainClass merge_classes(std::span<const TerrainClass> members);

}  // namespace strata
