#pragma once

#include <array>

#include "strata/config.hpp"
#include "strata/levels.hpp"
#include "strata/pose.hpp"

namespace strata {

struct Heading {
  double c = 1.0;
  double s = 0.0;
};

/// Unit vector of orientation index `theta` at `level`, from a table.
Heading unit_heading(Level level, int theta);

/// World positions of FL, FR, RL, RR for a Level-1 pose.
std::array<WorldPoint, 4> foot_positions(const Lattice& lattice, const Pose& pose, const RobotGeometry& robot);

/// World positions of the front and rear foot-area-pair centers for a Level-2
/// pose (lateral coordinate zero; the left and right areas hang off them).
std::array<WorldPoint, 2> pair_positions(const Lattice& lattice, const Pose& pose, const RobotGeometry& robot);

/// Pose cost: mean ground-contact cost plus body cost at Levels 1 and 2, the
/// a_r area average at Level 3. Returns +inf or NaN for infeasible poses.
/// Throws ContractError if the base lies outside the map.
double pose_cost(const LevelMaps& maps, const Pose& pose, const RobotGeometry& robot);

inline bool feasible_cost(double c) { return std::isfinite(c); }

/// Foot offsets allowed at `level` in that level's cells.
int travel_cells(const Lattice& lattice, Level level, const RobotGeometry& robot);

struct Promotion {
  bool feasible = false;
  Pose pose;
  double snap_cost = 0.0;
  double target_cost = 0.0;
};

/// Moves a pose to the next coarser level. The base snaps to the nearest
/// coarse lattice point; an exact tie goes toward `hint` (sign per axis, in
/// the direction of the maneuver that triggered the promotion) or down when
/// the hint is zero.
Promotion promote(const LevelMaps& maps, const Pose& pose, const PlannerConfig& cfg,
                  std::array<int, 2> hint = {0, 0});

/// Promotes repeatedly until `to`; returns the final pose (infeasible if any
/// stage is) with summed snap cost.
Promotion promote_to(const LevelMaps& maps, const Pose& pose, Level to, const PlannerConfig& cfg,
                     std::array<int, 2> hint = {0, 0});

/// Same place and heading one level finer. Level-2 pair offsets become equal
/// offsets of both feet; Level-3 poses get neutral pairs.
Pose demote(const Pose& pose);

/// Coarse lattice coordinates of a pose, ignoring feasibility. Used by the
/// heuristic lookup and goal tests.
Pose snap_to(const Pose& pose, Level to);

}  // namespace strata
